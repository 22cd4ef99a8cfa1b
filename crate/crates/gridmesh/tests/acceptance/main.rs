//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

#[path = "../common/mod.rs"]
mod files;
#[path = "../../../core/tests/common/mod.rs"]
mod fixtures;

mod check;
mod conservation;
mod degeneracy;
mod indicators;
mod power_flow;
mod qualitative;

use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Result<String, String>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "equation unit suite",
        limit: Some(Duration::from_secs(5)),
        run: examples::run,
    },
    Criterion {
        id: 2,
        title: "power-flow oracle equivalence",
        limit: Some(Duration::from_secs(10)),
        run: power_flow::run,
    },
    Criterion {
        id: 3,
        title: "conservation properties",
        limit: Some(Duration::from_secs(30)),
        run: conservation::run,
    },
    Criterion {
        id: 4,
        title: "mode degeneracy",
        limit: None,
        run: degeneracy::run,
    },
    Criterion {
        id: 5,
        title: "qualitative reproduction",
        limit: Some(Duration::from_secs(60)),
        run: qualitative::run,
    },
    Criterion {
        id: 6,
        title: "indicator correctness",
        limit: None,
        run: indicators::run,
    },
    Criterion {
        id: 7,
        title: "engine robustness",
        limit: None,
        run: robustness::run,
    },
];

fn main() -> ExitCode {
    // `cargo test -- <filter>` passes arguments; run everything regardless,
    // but honour `--list` so test discovery tools see one entry per criterion
    if std::env::args().any(|a| a == "--list") {
        for c in CRITERIA {
            println!("criterion_{}: test", c.id);
        }
        return ExitCode::SUCCESS;
    }
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!(
                "took {:.2} s, limit {} s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            )),
            (o, _) => o,
        };
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {} {}: {detail} ({:.2} s{limit})",
                c.id,
                c.title,
                elapsed.as_secs_f64()
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "FAIL criterion {} {}: {detail} ({:.2} s{limit})",
                    c.id,
                    c.title,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!("\n{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Commute-peak behaviour of the bundled scenarios.

use std::time::Instant;

use gridmesh::cli::cmd_compare;
use gridmesh::cli::cmd_run;
use gridmesh::output::Formats;
use gridmesh_core::CouplingMode;

use crate::bundled::{self, in_window};
use crate::check::Checks;
use crate::files;

/// Largest off-peak velocity deviation allowed, %.
const OFF_PEAK: f64 = 0.1;

pub fn run() -> Result<String, String> {
    let mut c = Checks::default();
    let cfg = bundled::load("case3", None)?;
    let start = Instant::now();
    let etc = bundled::simulate(&cfg, CouplingMode::EnergyTransportComm)?;
    let run_time = start.elapsed().as_secs_f64();
    c.ok("24 h run under 60 s", run_time < 60.0, run_time);
    let et = bundled::run_case("case2", CouplingMode::EnergyTransport)?;

    // (a) velocity minima sit on flow maxima
    for trace in [&et, &etc] {
        for (r, name) in trace.roads.iter().enumerate() {
            let u = trace.road_series(r, |x| x.velocity);
            let v = trace.road_series(r, |x| x.flow);
            let k_u = (0..u.len()).fold(0, |b, i| if u[i] < u[b] { i } else { b });
            let k_v = (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b });
            c.ok(
                &format!("{} {name} velocity minimum at flow maximum", trace.mode),
                k_u.abs_diff(k_v) <= 2,
                format!("steps {k_u} and {k_v}"),
            );
        }
    }

    // (b) packet loss only inside the commute windows
    let mut lossy_steps = 0;
    for rec in &etc.records {
        for (r, road) in rec.roads.iter().enumerate() {
            if road.packet_loss > 0.0 {
                lossy_steps += 1;
                c.ok(
                    &format!("{} loss at {}", etc.roads[r], rec.time),
                    in_window(&cfg, rec.time),
                    road.packet_loss,
                );
            }
        }
    }
    c.ok("some packet loss", lossy_steps > 0, lossy_steps);

    // (c) E+T+C never faster, slower somewhere at the peak, equal off-peak
    let mut strict = false;
    let mut off_peak_worst: f64 = 0.0;
    for (a, b) in et.records.iter().zip(&etc.records) {
        for (r, (ra, rb)) in a.roads.iter().zip(&b.roads).enumerate() {
            if in_window(&cfg, a.time) {
                c.ok(
                    &format!("{} not faster at {}", et.roads[r], a.time),
                    rb.velocity <= ra.velocity,
                    format!("{} > {}", rb.velocity, ra.velocity),
                );
                strict |= rb.velocity < ra.velocity;
            } else {
                let dev = 100.0 * (rb.velocity - ra.velocity).abs() / ra.velocity;
                off_peak_worst = off_peak_worst.max(dev);
                c.ok(
                    &format!("{} off-peak at {}", et.roads[r], a.time),
                    dev < OFF_PEAK,
                    format!("{dev}%"),
                );
            }
        }
    }
    c.ok("slower on some road at the peak", strict, "never slower");

    // deviations as reported by the compare command
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (dir_et, dir_etc) = (tmp.path().join("et"), tmp.path().join("etc"));
    let mut sink = Vec::new();
    let csv = Formats { csv: true, json: false };
    c.get(
        "run case2",
        cmd_run(
            &files::case("case2"),
            CouplingMode::EnergyTransport,
            None,
            &dir_et,
            csv,
            &mut sink,
        ),
    );
    c.get(
        "run case3",
        cmd_run(
            &files::case("case3"),
            CouplingMode::EnergyTransportComm,
            None,
            &dir_etc,
            csv,
            &mut sink,
        ),
    );
    let mut peaks = Vec::new();
    for quantity in ["velocity", "grid_power"] {
        let out = tmp.path().join(format!("deviation_{quantity}.csv"));
        if let Some(r) = c.get(quantity, cmd_compare(&dir_et, &dir_etc, quantity, &out, &mut sink)) {
            let t = r.peak_time.unwrap_or(f64::NAN);
            c.ok(&format!("{quantity} peak deviation positive"), r.peak > 0.0, r.peak);
            c.ok(&format!("{quantity} peak in a commute window"), in_window(&cfg, t), t);
            peaks.push(format!(
                "{quantity} {:.3}% at {t} s ({})",
                r.peak,
                r.peak_column.unwrap_or_default()
            ));
        }
    }
    c.finish(format!(
        "run {run_time:.2} s, off-peak velocity deviation {off_peak_worst:.1e}%, peaks: {}",
        peaks.join(", ")
    ))
}

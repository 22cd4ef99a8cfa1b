//! Indicator examples, violation-free traces and scale invariance.

use gridmesh_core::indicators::{pvlr, report, si_b, si_l};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::check::Checks;
use crate::examples::synthetic_trace;

pub fn run() -> Result<String, String> {
    let mut c = Checks::default();
    // the hand examples are shared with the unit suite
    let mut hand = Checks::default();
    crate::examples::indicators_only(&mut hand);
    let n_hand = hand.count();
    if let Err(e) = hand.finish("") {
        c.fail("hand examples", e);
    }

    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let mut trace = synthetic_trace(200);
    for rec in &mut trace.records {
        rec.bus_voltage[0] = rng.gen_range(0.95..=1.05);
        rec.line_power[0] = rng.gen_range(-1.0e6..=1.0e6);
        rec.blocks[0].grid_power = rng.gen_range(1.0..1.0e6);
        rec.community_grid_power = rec.blocks[0].grid_power;
    }
    let voltages: Vec<Vec<f64>> = trace.records.iter().map(|r| r.bus_voltage.clone()).collect();
    let powers: Vec<Vec<f64>> = trace.records.iter().map(|r| r.line_power.clone()).collect();
    c.ok(
        "si_b violation-free",
        si_b(&voltages) == Ok(0.0),
        format!("{:?}", si_b(&voltages)),
    );
    c.ok(
        "si_l violation-free",
        si_l(&powers, &[1.0e6]) == Ok(0.0),
        format!("{:?}", si_l(&powers, &[1.0e6])),
    );
    let rep = report(&trace);
    c.ok(
        "report si_b",
        rep.blocks[0].si_b == Some(0.0) && rep.community.si_b == Some(0.0),
        format!("{:?}", rep.blocks[0].si_b),
    );
    c.ok(
        "report si_l",
        rep.blocks[0].si_l == Some(0.0) && rep.community.si_l == Some(0.0),
        format!("{:?}", rep.blocks[0].si_l),
    );

    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = rng.gen_range(2..500);
        let series: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0e5..3.0e6)).collect();
        let scale = 10f64.powf(rng.gen_range(-6.0..6.0));
        let scaled: Vec<f64> = series.iter().map(|p| p * scale).collect();
        match (pvlr(&series), pvlr(&scaled)) {
            (Ok(a), Ok(b)) => {
                let rel = (a - b).abs() / a.abs().max(1e-300);
                worst = worst.max(rel);
                c.ok(
                    &format!("pvlr scaling {i}"),
                    rel <= 1e-12,
                    format!("{a} vs {b} at scale {scale}"),
                );
            }
            other => c.fail(&format!("pvlr scaling {i}"), format!("{other:?}")),
        }
    }
    c.finish(format!("{n_hand} hand examples, worst pvlr scaling error {worst:.1e}"))
}

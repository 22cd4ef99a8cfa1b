//! Power balance, vehicle conservation and battery bounds.

use gridmesh_core::energy::{battery_step, BatteryState};
use gridmesh_core::scenario::BatteryParams;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bundled::{self, CASES};
use crate::check::Checks;

const S_BASE: f64 = 1.0e6;

pub fn run() -> Result<String, String> {
    let mut c = Checks::default();
    let mut worst_balance: f64 = 0.0;
    let mut worst_vehicles: f64 = 0.0;
    for (name, mode) in CASES {
        let Some(trace) = c.get(name, bundled::run_case(name, mode)) else {
            continue;
        };
        for rec in &trace.records {
            let net_load: f64 = rec
                .blocks
                .iter()
                .map(|b| b.demand() - b.renewable() + b.battery_power)
                .sum();
            let mismatch = (rec.community_grid_power - net_load - rec.line_losses).abs() / S_BASE;
            worst_balance = worst_balance.max(mismatch);
            c.ok(
                &format!("{name} balance at {}", rec.time),
                mismatch <= 1e-6,
                format!("{mismatch:e} pu"),
            );
        }
        if trace.roads.is_empty() {
            continue;
        }
        // every road starts and ends at a block, so the fleet is closed
        let total = |r: &gridmesh_core::StepRecord| -> f64 {
            r.blocks.iter().map(|b| b.n_parked).sum::<f64>() + r.roads.iter().map(|x| x.vehicles).sum::<f64>()
        };
        let total0 = total(&trace.records[0]);
        for rec in &trace.records {
            let drift = (total(rec) - total0).abs() / total0;
            worst_vehicles = worst_vehicles.max(drift);
            c.ok(
                &format!("{name} vehicles at {}", rec.time),
                drift <= 1e-6,
                format!("{drift:e}"),
            );
        }
    }

    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let mut steps = 0usize;
    for s in 0..10_000 {
        let params = BatteryParams {
            capacity_wh: rng.gen_range(1.0..1.0e6),
            max_charge_w: rng.gen_range(0.0..1.0e6),
            max_discharge_w: rng.gen_range(0.0..1.0e6),
            charge_threshold_w: rng.gen_range(0.0..1.0e5),
            discharge_threshold_w: rng.gen_range(0.0..1.0e5),
            initial_soc: rng.gen_range(0.0..=1.0),
        };
        let mut state = BatteryState::idle(params.initial_soc);
        let mut inside = true;
        for _ in 0..rng.gen_range(1..50) {
            let renewable = rng.gen_range(0.0..2.0e6);
            let demand = rng.gen_range(0.0..2.0e6);
            let dt = [1.0, 60.0, 900.0, 3_600.0, 86_400.0][rng.gen_range(0..5)];
            state = battery_step(state, renewable, demand, &params, dt);
            inside &= (0.0..=1.0).contains(&state.soc);
            steps += 1;
        }
        c.ok(
            &format!("battery sequence {s}"),
            inside,
            format!("soc {} with {params:?}", state.soc),
        );
    }
    c.finish(format!(
        "worst balance {worst_balance:.1e} pu, worst vehicle drift {worst_vehicles:.1e}, {steps} battery steps"
    ))
}

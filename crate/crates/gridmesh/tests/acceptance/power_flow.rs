//! Sweep solver against the Newton oracle on random small radial feeders.

use gridmesh_core::energy::feeder::{Bus, Line};
use gridmesh_core::energy::{grid_draw, solve_power_flow, FeederNetwork, LoadKind};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::check::Checks;
use crate::fixtures::oracles::{newton_power_flow, RadialCase};

const V_BASE: f64 = 12_470.0;
const S_BASE: f64 = 1.0e6;
const TOL_PU: f64 = 1e-8;

pub fn random_case(rng: &mut StdRng) -> RadialCase {
    let n = rng.gen_range(2..=4);
    let mut case = RadialCase {
        parent: vec![0],
        z: vec![Complex64::new(0.0, 0.0)],
        p: vec![0.0],
    };
    for i in 1..n {
        case.parent.push(rng.gen_range(0..i));
        case.z
            .push(Complex64::new(rng.gen_range(0.005..0.05), rng.gen_range(0.005..0.05)));
        case.p.push(rng.gen_range(0.0..0.08));
    }
    case
}

pub fn network(case: &RadialCase) -> FeederNetwork {
    let z_base = V_BASE * V_BASE / S_BASE;
    let buses = (0..case.parent.len())
        .map(|i| Bus {
            id: i.to_string(),
            kind: if i == 0 { LoadKind::None } else { LoadKind::General },
        })
        .collect();
    let lines = (1..case.parent.len())
        .map(|i| Line {
            from: case.parent[i],
            to: i,
            impedance: case.z[i] * z_base,
            limit_w: 1e9,
        })
        .collect();
    FeederNetwork::new(buses, lines, 0, V_BASE).unwrap()
}

pub fn run() -> Result<String, String> {
    let mut c = Checks::default();
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut worst_v: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for i in 0..100 {
        let case = random_case(&mut rng);
        let injections: Vec<f64> = case.p.iter().map(|p| p * S_BASE).collect();
        let Some(sol) = c.get(
            &format!("instance {i}"),
            solve_power_flow(&network(&case), &injections, V_BASE),
        ) else {
            continue;
        };
        let (v, grid) = newton_power_flow(&case);
        let dv = sol
            .bus_voltages
            .iter()
            .zip(&v)
            .map(|(a, b)| (a / V_BASE - b).norm())
            .fold(0.0, f64::max);
        let dp = (grid_draw(&sol) / S_BASE - grid).abs();
        worst_v = worst_v.max(dv);
        worst_p = worst_p.max(dp);
        c.ok(
            &format!("instance {i} voltages"),
            dv <= TOL_PU,
            format!("{dv:e} pu on {case:?}"),
        );
        c.ok(
            &format!("instance {i} grid power"),
            dp <= TOL_PU,
            format!("{dp:e} pu on {case:?}"),
        );
    }
    c.finish(format!(
        "100 instances, worst voltage error {worst_v:.1e} pu, worst grid power error {worst_p:.1e} pu"
    ))
}

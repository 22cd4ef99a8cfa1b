//! Case 3 with every kappa at zero reproduces the case 2 run exactly.

use gridmesh_core::CouplingMode;

use crate::bundled;
use crate::check::Checks;

pub fn run() -> Result<String, String> {
    let mut c = Checks::default();
    let mut cfg = bundled::load("case3", None)?;
    for r in &mut cfg.roads {
        if let Some(link) = r.comm.as_mut() {
            link.kappa = 0.0;
        }
    }
    let etc = bundled::simulate(&cfg, CouplingMode::EnergyTransportComm)?;
    let et = bundled::run_case("case2", CouplingMode::EnergyTransport)?;
    c.ok(
        "same length",
        etc.len() == et.len(),
        format!("{} vs {}", etc.len(), et.len()),
    );
    c.ok(
        "same elements",
        etc.blocks == et.blocks && etc.roads == et.roads && etc.buses == et.buses && etc.lines == et.lines,
        "differ",
    );
    let first = et.records.iter().zip(&etc.records).position(|(a, b)| a != b);
    c.ok(
        "records bit-identical",
        first.is_none(),
        format!("first difference at step {first:?}"),
    );
    let lossy = etc
        .records
        .iter()
        .flat_map(|r| &r.roads)
        .filter(|r| r.packet_loss != 0.0)
        .count();
    c.ok("no packet loss", lossy == 0, lossy);
    c.finish(format!("{} steps identical", et.len()))
}

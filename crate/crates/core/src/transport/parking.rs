//! Vehicle balance of a block's parking and the expected charging count.

use crate::SECONDS_PER_HOUR;

/// Vehicles parked in a block and how many of them are charging. Counts are
/// continuous.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlockParking {
    pub n_parked: f64,
    pub n_charging: f64,
}

impl BlockParking {
    pub fn new(n_parked: f64) -> Self {
        Self {
            n_parked,
            n_charging: 0.0,
        }
    }
}

/// Integrate arrivals and departures (vehicles/h) over `dt` seconds. The
/// count is floored at zero, with a warning, when departures would drive it
/// negative.
pub fn parking_step(parking: BlockParking, inflows: &[f64], outflows: &[f64], dt: f64) -> BlockParking {
    let arriving: f64 = inflows.iter().sum();
    let leaving: f64 = outflows.iter().sum();
    let mut n_parked = parking.n_parked + (arriving - leaving) * dt / SECONDS_PER_HOUR;
    if n_parked < 0.0 {
        log::warn!(
            "parking count fell to {n_parked:.6} vehicles (arrivals {arriving} veh/h, departures {leaving} veh/h); flooring at 0"
        );
        n_parked = 0.0;
    }
    BlockParking {
        n_parked,
        n_charging: parking.n_charging.min(n_parked),
    }
}

/// Expected number of charging vehicles when each of `n_parked` vehicles
/// charges with probability `p_charge` in the current hour.
pub fn charging_count(n_parked: f64, p_charge: f64) -> f64 {
    p_charge * n_parked
}

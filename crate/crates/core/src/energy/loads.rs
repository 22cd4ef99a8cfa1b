//! Demand from EV charging and communication towers.

use crate::scenario::CommTowerParams;

/// Aggregate charging power of `n_char` vehicles at a constant per-vehicle
/// rate, W. `n_char` is continuous.
pub fn ev_charging_power(n_char: f64, p_char: f64) -> f64 {
    n_char * p_char
}

/// Electrical load of the block's towers, W, each handling `throughput`
/// packets/s: electronics energy for sending and receiving plus amplifier
/// energy growing with `distance^alpha`.
pub fn comm_tower_power(throughput: f64, params: &CommTowerParams) -> f64 {
    let per_tower = 2.0 * throughput * params.e_elec
        + throughput * params.eps_elec * libm::pow(params.distance_m, params.path_loss_exponent);
    f64::from(params.towers) * per_tower
}

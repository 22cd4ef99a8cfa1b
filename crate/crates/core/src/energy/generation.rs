//! Photovoltaic and wind generation.

use crate::scenario::{PvParams, WindParams};

/// Irradiance inputs for one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherPoint {
    pub direct_normal: f64,
    pub sky_diffuse: f64,
    pub ground_diffuse: f64,
    pub cos_incidence: f64,
}

/// Total irradiance on the array plane, W/m². The direct term is clipped at
/// zero when the sun is behind the array.
pub fn pv_irradiance(w: WeatherPoint) -> f64 {
    let direct = f64::max(0.0, w.cos_incidence * w.direct_normal);
    direct + (w.sky_diffuse + w.ground_diffuse)
}

/// AC output of all arrays, W.
pub fn pv_power(irradiance: f64, params: &PvParams) -> f64 {
    params
        .arrays
        .iter()
        .map(|a| a.area_m2 * a.active_fraction * a.efficiency * irradiance * a.inverter_efficiency)
        .sum()
}

/// Power of a single turbine read off the piecewise-linear curve. Zero below
/// the first point (cut-in) and above the last (cut-out).
pub fn turbine_power(speed: f64, curve: &[(f64, f64)]) -> f64 {
    let (Some(&(cut_in, _)), Some(&(cut_out, last))) = (curve.first(), curve.last()) else {
        return 0.0;
    };
    if speed < cut_in || speed > cut_out {
        return 0.0;
    }
    if speed == cut_out {
        return last;
    }
    let i = curve.partition_point(|&(s, _)| s <= speed) - 1;
    let (s0, p0) = curve[i];
    let (s1, p1) = curve[i + 1];
    p0 + (p1 - p0) * (speed - s0) / (s1 - s0)
}

/// AC output of all turbines, W.
pub fn wind_power(speed: f64, params: &WindParams) -> f64 {
    let one = turbine_power(speed, &params.curve) * params.scale * params.inverter_efficiency;
    (0..params.count).map(|_| one).sum()
}

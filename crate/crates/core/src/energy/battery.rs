//! Battery with a surplus/deficit control sequence.
//!
//! Renewable output serves demand first. A surplus above the charge
//! threshold charges the battery, a deficit above the discharge threshold
//! discharges it, and anything else leaves it in standby. Power is limited by
//! the rating and by the energy that would fill or empty the battery within
//! the step, so the state of charge never leaves `[0, 1]`.

use crate::scenario::BatteryParams;
use crate::SECONDS_PER_HOUR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BatteryMode {
    Charging,
    Discharging,
    #[default]
    Standby,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryState {
    /// State of charge in `[0, 1]`.
    pub soc: f64,
    pub mode: BatteryMode,
    /// Power exchanged during the last step, W; positive while charging.
    pub power: f64,
}

impl BatteryState {
    pub fn idle(soc: f64) -> Self {
        Self {
            soc,
            mode: BatteryMode::Standby,
            power: 0.0,
        }
    }
}

/// Advance the battery by `dt` seconds.
pub fn battery_step(
    state: BatteryState,
    p_renewable: f64,
    p_demand: f64,
    params: &BatteryParams,
    dt: f64,
) -> BatteryState {
    let surplus = p_renewable - p_demand;
    let deficit = -surplus;
    let energy_ws = params.capacity_wh * SECONDS_PER_HOUR;

    if surplus > params.charge_threshold_w && state.soc < 1.0 {
        let fill = (1.0 - state.soc) * energy_ws / dt;
        let power = surplus.min(params.max_charge_w).min(fill);
        if power > 0.0 {
            let soc = if power == fill {
                1.0
            } else {
                state.soc + power * dt / energy_ws
            };
            return BatteryState {
                soc: soc.min(1.0),
                mode: BatteryMode::Charging,
                power,
            };
        }
    } else if deficit > params.discharge_threshold_w && state.soc > 0.0 {
        let empty = state.soc * energy_ws / dt;
        let power = deficit.min(params.max_discharge_w).min(empty);
        if power > 0.0 {
            let soc = if power == empty {
                0.0
            } else {
                state.soc - power * dt / energy_ws
            };
            return BatteryState {
                soc: soc.max(0.0),
                mode: BatteryMode::Discharging,
                power: -power,
            };
        }
    }
    BatteryState::idle(state.soc)
}

//! Energy agent: generation, storage, load aggregation and distribution
//! network power flow.

pub mod battery;
pub mod feeder;
pub mod generation;
pub mod loads;

pub use battery::{battery_step, BatteryMode, BatteryState};
pub use feeder::{
    grid_draw, solve_power_flow, solve_power_flow_with, FeederError, FeederNetwork, LoadKind, PowerFlowError,
    PowerFlowSolution, SweepOptions,
};
pub use generation::{pv_irradiance, pv_power, wind_power, WeatherPoint};
pub use loads::{comm_tower_power, ev_charging_power};

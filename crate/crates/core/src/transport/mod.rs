//! Transportation agent: roads, block parking and EV charging demand.

pub mod parking;
pub mod road;

pub use parking::{charging_count, parking_step, BlockParking};
pub use road::{free_flow_speed, road_step, road_velocity, solve_velocity, RoadError, RoadState};

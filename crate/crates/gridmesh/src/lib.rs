//! Scenario files, trace output and the command-line interface of the
//! gridmesh co-simulator. The simulation itself lives in `gridmesh_core`.

pub mod cli;
pub mod output;
pub mod scenario_file;

pub use gridmesh_core as core;
pub use scenario_file::{load_scenario, load_scenario_with, LoadError};

//! Quasi-static co-simulation of interdependent energy, transportation and
//! communication infrastructure in a connected community.
//!
//! The community is organised in three layers: a community layer of blocks
//! joined by power lines and one-way roads, a block layer where each block's
//! agents exchange state, and the agent layer holding the physics of each
//! infrastructure system:
//!
//! * [`energy`]: renewable generation, battery control, load aggregation and a
//!   radial backward-forward sweep power flow.
//! * [`transport`]: macroscopic flow-velocity road model with a variable
//!   travel delay, block parking balance and EV charging count.
//! * [`comms`]: packet throughput, packet loss and the travel-time
//!   degradation factor fed back to the roads.
//!
//! [`engine`] steps the coupled system on a fixed grid and records a
//! [`engine::TraceSet`]; [`indicators`] turns traces into performance
//! indicators.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. File formats and the command-line interface live in the
//! `gridmesh` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod comms;
pub mod energy;
pub mod engine;
pub mod indicators;
pub mod scenario;
pub mod series;
pub mod transport;

pub use engine::{CouplingMode, EngineError, Simulator, StepRecord, TraceSet};
pub use scenario::{ScenarioConfig, ValidationError};
pub use series::{Interpolation, SeriesError, TimeGrid, TimeSeriesProfile};

/// Seconds per hour, used to convert vehicles/h rates over second steps.
pub const SECONDS_PER_HOUR: f64 = 3600.0;

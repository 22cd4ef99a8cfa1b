//! Block- and community-layer orchestration.
//!
//! Each step evaluates the algebraic coupling variables (charging count,
//! packet loss, tower throughput, grid power) from the stocks at the start of
//! the step, then integrates the stocks (road contents, parked vehicles,
//! state of charge) to the end of the step. Within a step the agents are
//! swept transport, comms, energy and the sweep is repeated until the
//! coupling variables stop changing.

mod compare;
mod network;
mod trace;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::comms::{delay_factor, packet_loss, throughput_from_traffic, CommState};
use crate::energy::battery::{battery_step, BatteryState};
use crate::energy::feeder::{solve_power_flow, PowerFlowError, PowerFlowSolution};
use crate::energy::generation::{pv_irradiance, pv_power, wind_power, WeatherPoint};
use crate::energy::loads::{comm_tower_power, ev_charging_power};
use crate::scenario::{ScenarioConfig, ValidationError};
use crate::series::{SeriesError, TimeGrid};
use crate::transport::{charging_count, parking_step, road_step, BlockParking, RoadError, RoadState};

pub use compare::{compare, relative_deviation, CompareError, DeviationReport};
pub use trace::{BlockRecord, BusInfo, LineInfo, QuantityTable, RoadRecord, StepRecord, TraceSet, QUANTITIES};

use network::{BlockLoads, CommunityGrid};

/// Which agents are closed-loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingMode {
    /// Energy only; EV charging and tower throughput are prescribed series.
    EnergyOnly,
    /// Energy and transport; communication never delays traffic.
    EnergyTransport,
    /// Energy, transport and communication.
    EnergyTransportComm,
}

impl CouplingMode {
    pub const ALL: [CouplingMode; 3] = [
        CouplingMode::EnergyOnly,
        CouplingMode::EnergyTransport,
        CouplingMode::EnergyTransportComm,
    ];

    /// Short name used on the command line: `e`, `et` or `etc`.
    pub fn as_str(self) -> &'static str {
        match self {
            CouplingMode::EnergyOnly => "e",
            CouplingMode::EnergyTransport => "et",
            CouplingMode::EnergyTransportComm => "etc",
        }
    }

    pub fn simulates_transport(self) -> bool {
        self != CouplingMode::EnergyOnly
    }
}

impl fmt::Display for CouplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown coupling mode \"{0}\" (expected e, et or etc)")]
pub struct ParseModeError(pub String);

impl FromStr for CouplingMode {
    type Err = ParseModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "e" => Ok(CouplingMode::EnergyOnly),
            "et" => Ok(CouplingMode::EnergyTransport),
            "etc" => Ok(CouplingMode::EnergyTransportComm),
            _ => Err(ParseModeError(String::from(s))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("{0}")]
    Validation(ValidationError),
    #[error("series {field}: {source}")]
    Series { field: String, source: SeriesError },
    #[error("block {block} feeder: {message}")]
    Network { block: String, message: String },
    #[error("t={time} s, road {road}: {source}")]
    Road { time: f64, road: String, source: RoadError },
    #[error("t={time} s, feeder of block {block}: {source}")]
    PowerFlow {
        time: f64,
        block: String,
        source: PowerFlowError,
    },
    #[error("t={time} s: coupling did not converge after {iterations} sweeps (residual {residual:.3e})")]
    NotConverged {
        time: f64,
        iterations: usize,
        residual: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockState {
    pub battery: BatteryState,
    pub parking: BlockParking,
    pub comm: CommState,
}

/// Stocks carried from one step to the next.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub blocks: Vec<BlockState>,
    /// Empty when transport is not simulated.
    pub roads: Vec<RoadState>,
    /// Packet loss of each road at the previous step, used as the first
    /// guess of the next coupling sweep.
    pub gamma: Vec<f64>,
}

/// Runs one scenario in one coupling mode.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: ScenarioConfig,
    mode: CouplingMode,
    grid: TimeGrid,
    community: CommunityGrid,
}

/// Relative change between two coupling vectors; zero when both entries are.
fn max_relative_change(old: &[f64], new: &[f64]) -> f64 {
    old.iter()
        .zip(new)
        .map(|(&a, &b)| {
            let diff = libm::fabs(b - a);
            if diff == 0.0 {
                0.0
            } else {
                diff / f64::max(libm::fabs(a), libm::fabs(b))
            }
        })
        .fold(0.0, f64::max)
}

/// Result of one sweep.
struct Sweep {
    roads: Vec<RoadState>,
    road_records: Vec<RoadRecord>,
    blocks: Vec<BlockState>,
    block_records: Vec<BlockRecord>,
    solutions: Vec<PowerFlowSolution>,
    gamma: Vec<f64>,
    coupling: Vec<f64>,
}

impl Simulator {
    /// Validate `config` for `mode` and resample its series onto the grid.
    pub fn new(config: &ScenarioConfig, mode: CouplingMode) -> Result<Self, EngineError> {
        config.validate_for(mode).map_err(EngineError::Validation)?;
        let mut config = config.clone();
        config
            .resample_series()
            .map_err(|(field, source)| EngineError::Series { field, source })?;
        let grid = config.grid().map_err(|source| EngineError::Series {
            field: String::from("dt"),
            source,
        })?;
        let community = CommunityGrid::build(&config).map_err(|(block, e)| EngineError::Network {
            block,
            message: alloc::format!("{e}"),
        })?;
        Ok(Self {
            config,
            mode,
            grid,
            community,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn mode(&self) -> CouplingMode {
        self.mode
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn initial_state(&self) -> SimulationState {
        let blocks = self
            .config
            .blocks
            .iter()
            .map(|b| BlockState {
                battery: BatteryState::idle(b.battery.initial_soc),
                parking: BlockParking::new(b.initial_ev_count),
                comm: CommState::default(),
            })
            .collect();
        let roads: Vec<RoadState> = if self.mode.simulates_transport() {
            self.config
                .roads
                .iter()
                .map(|r| RoadState::empty(r, self.config.sim_start))
                .collect()
        } else {
            Vec::new()
        };
        SimulationState {
            gamma: alloc::vec![0.0; roads.len()],
            blocks,
            roads,
        }
    }

    /// An empty trace carrying the element names.
    pub fn empty_trace(&self) -> TraceSet {
        TraceSet {
            mode: self.mode,
            dt: self.config.dt,
            blocks: self.config.blocks.iter().map(|b| b.name.clone()).collect(),
            roads: if self.mode.simulates_transport() {
                self.config.roads.iter().map(|r| r.name.clone()).collect()
            } else {
                Vec::new()
            },
            buses: self.community.bus_info(&self.config),
            lines: self.community.line_info(&self.config),
            records: Vec::new(),
        }
    }

    /// Advance `state` over grid step `k`, i.e. from `t_k` to `t_k + dt`.
    pub fn step(&self, state: &SimulationState, k: usize) -> Result<(SimulationState, StepRecord), EngineError> {
        let t = self.grid.time(k);
        let mut gamma = state.gamma.clone();
        let mut previous: Option<Vec<f64>> = None;
        let mut residual = f64::INFINITY;
        for iteration in 1..=self.config.coupling_max_iters.max(2) {
            let sweep = self.sweep(state, k, &gamma)?;
            if let Some(prev) = &previous {
                residual = max_relative_change(prev, &sweep.coupling);
            }
            if previous.is_some() && residual < self.config.coupling_tolerance {
                let (bus_voltage, line_power) = self.community.flatten(&sweep.solutions);
                let record = StepRecord {
                    time: t,
                    community_grid_power: sweep.solutions.iter().map(|s| s.grid_power).sum(),
                    line_losses: self
                        .community
                        .trees
                        .iter()
                        .zip(&sweep.solutions)
                        .map(|(tree, s)| s.line_losses(&tree.net).sum::<f64>())
                        .sum(),
                    blocks: sweep.block_records,
                    roads: sweep.road_records,
                    bus_voltage,
                    line_power,
                    coupling_iterations: iteration,
                    coupling_residual: residual,
                };
                let next = SimulationState {
                    blocks: sweep.blocks,
                    roads: sweep.roads,
                    gamma: sweep.gamma,
                };
                return Ok((next, record));
            }
            gamma = sweep.gamma;
            previous = Some(sweep.coupling);
        }
        Err(EngineError::NotConverged {
            time: t,
            iterations: self.config.coupling_max_iters.max(2),
            residual,
        })
    }

    fn sweep(&self, state: &SimulationState, k: usize, gamma_guess: &[f64]) -> Result<Sweep, EngineError> {
        let cfg = &self.config;
        let t = self.grid.time(k);
        let dt = self.grid.dt;
        let transport = self.mode.simulates_transport();
        let with_comm = self.mode == CouplingMode::EnergyTransportComm;

        // transport
        let mut roads = Vec::with_capacity(state.roads.len());
        let mut road_records = Vec::with_capacity(state.roads.len());
        let mut arrivals = alloc::vec![Vec::new(); cfg.blocks.len()];
        let mut departures = alloc::vec![Vec::new(); cfg.blocks.len()];
        if transport {
            for (r, (spec, rs)) in cfg.roads.iter().zip(&state.roads).enumerate() {
                let factor = if with_comm { delay_factor(gamma_guess[r]) } else { 1.0 };
                let q_in = spec.departures.value(k);
                let next = road_step(rs, q_in, factor, spec, t, dt).map_err(|source| EngineError::Road {
                    time: t,
                    road: spec.name.clone(),
                    source,
                })?;
                // block_index is checked by validation
                let from = cfg.block_index(&spec.from).unwrap_or(0);
                let to = cfg.block_index(&spec.to).unwrap_or(0);
                departures[from].push(q_in);
                arrivals[to].push(next.q_out);
                road_records.push(RoadRecord {
                    q_in,
                    q_out: next.q_out,
                    velocity: next.u_ave,
                    flow: next.v_ave,
                    travel_time: next.t_travel,
                    vehicles: rs.vehicles,
                    throughput: 0.0,
                    packet_loss: 0.0,
                });
                roads.push(next);
            }
        }

        // comms
        let mut gamma = alloc::vec![0.0; state.roads.len()];
        let mut block_throughput = alloc::vec![0.0; cfg.blocks.len()];
        if transport {
            for (r, spec) in cfg.roads.iter().enumerate() {
                let Some(link) = &spec.comm else { continue };
                let q_c = throughput_from_traffic(state.roads[r].vehicles, link.packets_per_vehicle);
                if with_comm {
                    gamma[r] = packet_loss(q_c, link.kappa, link.threshold_pps);
                }
                road_records[r].throughput = q_c;
                road_records[r].packet_loss = gamma[r];
                block_throughput[cfg.block_index(&spec.from).unwrap_or(0)] += q_c;
            }
        } else {
            for (b, spec) in cfg.blocks.iter().enumerate() {
                block_throughput[b] = spec.prescribed_throughput.as_ref().map_or(0.0, |s| s.value(k));
            }
        }

        // energy
        let weather = WeatherPoint {
            direct_normal: cfg.weather.direct_normal.value(k),
            sky_diffuse: cfg.weather.sky_diffuse.value(k),
            ground_diffuse: cfg.weather.ground_diffuse.value(k),
            cos_incidence: cfg.weather.cos_incidence.value(k),
        };
        let irradiance = pv_irradiance(weather);
        let wind_speed = cfg.weather.wind_speed.value(k);
        let mut blocks = Vec::with_capacity(cfg.blocks.len());
        let mut block_records = Vec::with_capacity(cfg.blocks.len());
        let mut loads = Vec::with_capacity(cfg.blocks.len());
        for (b, spec) in cfg.blocks.iter().enumerate() {
            let s = &state.blocks[b];
            let (parking, n_char, p_ev) = if transport {
                let n_char = charging_count(s.parking.n_parked, spec.charge_probability.value(k));
                let parking = parking_step(s.parking, &arrivals[b], &departures[b], dt);
                let parking = BlockParking {
                    n_charging: n_char.min(parking.n_parked),
                    ..parking
                };
                (parking, n_char, ev_charging_power(n_char, spec.ev_charge_power_w))
            } else {
                let p_ev = spec.prescribed_ev_power.as_ref().map_or(0.0, |s| s.value(k));
                let n_char = if spec.ev_charge_power_w > 0.0 {
                    p_ev / spec.ev_charge_power_w
                } else {
                    0.0
                };
                (s.parking, n_char, p_ev)
            };
            let p_pv = pv_power(irradiance, &spec.pv);
            let p_win = wind_power(wind_speed, &spec.wind);
            let p_bui = spec.building_load.value(k);
            let p_gen = spec.general_load.as_ref().map_or(0.0, |s| s.value(k));
            let throughput = block_throughput[b];
            let p_com = comm_tower_power(throughput, &spec.comm);
            let demand = p_bui + p_ev + p_com + p_gen;
            let battery = battery_step(s.battery, p_pv + p_win, demand, &spec.battery, dt);
            loads.push(BlockLoads {
                building: p_bui,
                ev: p_ev,
                general: p_gen,
                comm: p_com,
                generation: p_pv + p_win,
                storage: battery.power,
            });
            block_records.push(BlockRecord {
                grid_power: 0.0,
                soc: s.battery.soc,
                battery_power: battery.power,
                p_pv,
                p_win,
                p_ev,
                p_com,
                p_bui,
                p_gen,
                n_parked: s.parking.n_parked,
                n_char,
                throughput,
            });
            blocks.push(BlockState {
                battery,
                parking,
                comm: CommState {
                    q_c: throughput,
                    gamma: 0.0,
                    del: 0.0,
                },
            });
        }

        let injections = self.community.injections(&loads);
        let mut solutions = Vec::with_capacity(self.community.trees.len());
        for (i, tree) in self.community.trees.iter().enumerate() {
            let slack_voltage = tree.net.nominal_voltage();
            let solution = solve_power_flow(&tree.net, &injections[i], slack_voltage).map_err(|source| {
                let root = self.community.sites.iter().position(|s| s.tree == i).unwrap_or(0);
                EngineError::PowerFlow {
                    time: t,
                    block: cfg.blocks[root].name.clone(),
                    source,
                }
            })?;
            solutions.push(solution);
        }
        for (b, record) in block_records.iter_mut().enumerate() {
            let site = &self.community.sites[b];
            record.grid_power = self.community.block_draw(b, &solutions[site.tree]);
        }
        for (b, spec) in cfg.blocks.iter().enumerate() {
            let worst = cfg
                .roads
                .iter()
                .zip(&gamma)
                .filter(|(r, _)| r.from == spec.name)
                .map(|(_, &g)| g)
                .fold(0.0, f64::max);
            blocks[b].comm.gamma = worst;
        }

        let mut coupling: Vec<f64> = block_records.iter().map(|r| r.n_char).collect();
        coupling.extend_from_slice(&gamma);
        coupling.extend(block_records.iter().map(|r| r.grid_power));
        Ok(Sweep {
            roads,
            road_records,
            blocks,
            block_records,
            solutions,
            gamma,
            coupling,
        })
    }

    /// Step over the whole window.
    pub fn run(&self) -> Result<TraceSet, EngineError> {
        let mut trace = self.empty_trace();
        let mut state = self.initial_state();
        let steps = self.grid.steps();
        trace.records.reserve(steps);
        for k in 0..steps {
            let (next, record) = self.step(&state, k)?;
            trace.records.push(record);
            state = next;
        }
        Ok(trace)
    }
}

/// Run `config` in `mode`. A window with `sim_end <= sim_start` yields an
/// empty trace.
pub fn run(config: &ScenarioConfig, mode: CouplingMode) -> Result<TraceSet, EngineError> {
    if config.sim_end <= config.sim_start && config.dt > 0.0 {
        let mut open = config.clone();
        open.sim_end = open.sim_start + open.dt;
        let sim = Simulator::new(&open, mode)?;
        return Ok(sim.empty_trace());
    }
    Simulator::new(config, mode)?.run()
}

/// Compare one quantity of two traces.
pub fn compare_traces(a: &TraceSet, b: &TraceSet, quantity: &str) -> Result<DeviationReport, CompareError> {
    let missing = || CompareError::QuantityMismatch {
        a: String::from(quantity),
        b: String::from("(unknown quantity)"),
    };
    compare(
        &a.table(quantity).ok_or_else(missing)?,
        &b.table(quantity).ok_or_else(missing)?,
    )
}

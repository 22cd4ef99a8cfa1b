//! Declarative description of a community: blocks, roads, power lines,
//! device parameters and input series, plus validation.
//!
//! Loading from disk lives in the `gridmesh` crate; this module only knows
//! about the in-memory configuration.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::energy::feeder::{FeederNetwork, LoadKind};
use crate::engine::CouplingMode;
use crate::series::{resample, SeriesError, TimeGrid, TimeSeriesProfile};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[cfg(feature = "serde")]
fn default_tolerance() -> f64 {
    1e-8
}

#[cfg(feature = "serde")]
fn default_max_iters() -> usize {
    50
}

/// Full, simulation-ready description of a community.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ScenarioConfig {
    #[cfg_attr(feature = "serde", serde(default))]
    pub name: String,
    /// Simulation start, s.
    pub sim_start: f64,
    /// Simulation end, s.
    pub sim_end: f64,
    /// Step size, s.
    pub dt: f64,
    /// Relative change of the coupling variables accepted as a fixed point.
    #[cfg_attr(feature = "serde", serde(default = "default_tolerance"))]
    pub coupling_tolerance: f64,
    #[cfg_attr(feature = "serde", serde(default = "default_max_iters"))]
    pub coupling_max_iters: usize,
    /// Commute-peak windows `(start s, end s)` used when reporting.
    #[cfg_attr(feature = "serde", serde(default))]
    pub commute_windows: Vec<(f64, f64)>,
    /// Constant locational marginal price, currency/Wh. Carried, not acted on.
    #[cfg_attr(feature = "serde", serde(default))]
    pub lmp: f64,
    pub weather: WeatherSeries,
    pub blocks: Vec<BlockSpec>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub roads: Vec<RoadSpec>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub community_lines: Vec<InterBlockLineSpec>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct WeatherSeries {
    /// Direct normal irradiance, W/m².
    pub direct_normal: TimeSeriesProfile,
    /// Sky diffuse irradiance on the array plane, W/m².
    pub sky_diffuse: TimeSeriesProfile,
    /// Ground-reflected diffuse irradiance on the array plane, W/m².
    pub ground_diffuse: TimeSeriesProfile,
    /// Cosine of the incidence angle between the sun and the array normal.
    pub cos_incidence: TimeSeriesProfile,
    /// Hub-height wind speed, m/s.
    pub wind_speed: TimeSeriesProfile,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct BlockSpec {
    pub name: String,
    pub pv: PvParams,
    pub wind: WindParams,
    pub battery: BatteryParams,
    pub feeder: FeederSpec,
    pub comm: CommTowerParams,
    /// Vehicles parked in the block at `sim_start`.
    pub initial_ev_count: f64,
    /// Charging power of one vehicle, W.
    pub ev_charge_power_w: f64,
    /// Hourly probability that a parked vehicle charges.
    pub charge_probability: TimeSeriesProfile,
    /// Aggregated building load, W.
    pub building_load: TimeSeriesProfile,
    /// Optional general (non-building) load, W.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub general_load: Option<TimeSeriesProfile>,
    /// EV charging power used when transport is not simulated, W.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub prescribed_ev_power: Option<TimeSeriesProfile>,
    /// Tower throughput used when transport is not simulated, packets/s.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub prescribed_throughput: Option<TimeSeriesProfile>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct PvParams {
    pub arrays: Vec<PvArray>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct PvArray {
    pub area_m2: f64,
    pub active_fraction: f64,
    pub efficiency: f64,
    pub inverter_efficiency: f64,
}

/// `count` identical turbines sharing one piecewise-linear power curve.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct WindParams {
    pub count: u32,
    /// `(wind speed m/s, power W)` points; zero outside the first..last speed.
    pub curve: Vec<(f64, f64)>,
    pub scale: f64,
    pub inverter_efficiency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct BatteryParams {
    pub capacity_wh: f64,
    pub max_charge_w: f64,
    pub max_discharge_w: f64,
    /// Surplus above which the battery charges, W.
    #[cfg_attr(feature = "serde", serde(default))]
    pub charge_threshold_w: f64,
    /// Deficit above which the battery discharges, W.
    #[cfg_attr(feature = "serde", serde(default))]
    pub discharge_threshold_w: f64,
    pub initial_soc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct CommTowerParams {
    pub towers: u32,
    /// Electronics energy per packet, J.
    pub e_elec: f64,
    /// Amplifier energy per packet per m^alpha, J.
    pub eps_elec: f64,
    pub distance_m: f64,
    pub path_loss_exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct FeederSpec {
    pub nominal_voltage_v: f64,
    /// Id of the bus where the block connects upstream.
    pub slack: String,
    pub buses: Vec<BusSpec>,
    pub lines: Vec<LineSpec>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct BusSpec {
    pub id: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub kind: LoadKind,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct LineSpec {
    pub from: String,
    pub to: String,
    pub r_ohm: f64,
    pub x_ohm: f64,
    /// Active power rating, W.
    pub limit_w: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct RoadSpec {
    pub name: String,
    pub from: String,
    pub to: String,
    pub length_m: f64,
    /// Capacity, vehicles/h.
    pub capacity_vph: f64,
    pub design_speed_mps: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// Vehicles leaving `from` onto this road, vehicles/h.
    pub departures: TimeSeriesProfile,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub comm: Option<CommLinkParams>,
}

/// Routing link between a road and the tower of its origin block.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct CommLinkParams {
    /// Packet-loss proportional coefficient.
    pub kappa: f64,
    /// Transmission threshold, packets/s.
    pub threshold_pps: f64,
    /// Routing packets generated per vehicle on the road, packets/s.
    pub packets_per_vehicle: f64,
}

/// Power line joining the terminal buses of two blocks.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct InterBlockLineSpec {
    pub name: String,
    /// Upstream block.
    pub from: String,
    /// Downstream block, fed through this line instead of its own grid tie.
    pub to: String,
    pub r_ohm: f64,
    pub x_ohm: f64,
    pub limit_w: f64,
}

/// One failed check, with the dotted path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

/// Every invariant violation found in a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError {
    pub errors: Vec<FieldError>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scenario validation failed:")?;
        for e in &self.errors {
            write!(f, "\n  {}: {}", e.field, e.message)?;
        }
        Ok(())
    }
}

impl core::error::Error for ValidationError {}

impl ValidationError {
    pub fn mentions(&self, needle: &str) -> bool {
        self.errors
            .iter()
            .any(|e| e.field.contains(needle) || e.message.contains(needle))
    }
}

#[derive(Default)]
struct Checker {
    errors: Vec<FieldError>,
}

impl Checker {
    fn fail(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.errors.push(FieldError {
            field: field.into(),
            message: message.into(),
        });
    }

    fn require(&mut self, ok: bool, field: impl FnOnce() -> String, message: &str) {
        if !ok {
            self.fail(field(), message);
        }
    }

    fn unit(&mut self, value: f64, field: impl FnOnce() -> String) {
        self.require((0.0..=1.0).contains(&value), field, "must be in [0, 1]");
    }

    fn nonneg(&mut self, value: f64, field: impl FnOnce() -> String) {
        self.require(value >= 0.0 && value.is_finite(), field, "must be finite and >= 0");
    }

    fn positive(&mut self, value: f64, field: impl FnOnce() -> String) {
        self.require(value > 0.0 && value.is_finite(), field, "must be finite and > 0");
    }

    fn series(&mut self, s: &TimeSeriesProfile, field: &str, lo: f64, hi: f64) {
        if let Err(e) = s.check() {
            self.fail(field, format!("{e}"));
            return;
        }
        if s.min_value() < lo || s.max_value() > hi {
            self.fail(field, format!("values must lie in [{lo}, {hi}]"));
        }
    }

    fn finish(self) -> Result<(), ValidationError> {
        if self.errors.is_empty() {
            Ok(())
        } else {
            Err(ValidationError { errors: self.errors })
        }
    }
}

impl ScenarioConfig {
    pub fn grid(&self) -> Result<TimeGrid, SeriesError> {
        TimeGrid::new(self.sim_start, self.sim_end, self.dt)
    }

    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.name == name)
    }

    /// Check every structural and value invariant; reports all failures.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut c = Checker::default();
        self.check_simulation(&mut c);
        self.check_weather(&mut c);
        let mut names = BTreeSet::new();
        for b in &self.blocks {
            if !names.insert(b.name.as_str()) {
                c.fail(format!("blocks[{}].name", b.name), "duplicate block name");
            }
            check_block(&mut c, b);
        }
        if self.blocks.is_empty() {
            c.fail("blocks", "at least one block is required");
        }
        self.check_roads(&mut c);
        self.check_community_lines(&mut c);
        c.finish()
    }

    /// [`validate`](Self::validate) plus the inputs `mode` needs.
    pub fn validate_for(&self, mode: CouplingMode) -> Result<(), ValidationError> {
        let mut errors = match self.validate() {
            Ok(()) => Vec::new(),
            Err(e) => e.errors,
        };
        let mut c = Checker::default();
        match mode {
            CouplingMode::EnergyOnly => {
                for b in &self.blocks {
                    c.require(
                        b.prescribed_ev_power.is_some(),
                        || format!("blocks[{}].prescribed_ev_power", b.name),
                        "required when transport is not simulated (mode e)",
                    );
                    c.require(
                        b.prescribed_throughput.is_some(),
                        || format!("blocks[{}].prescribed_throughput", b.name),
                        "required when transport is not simulated (mode e)",
                    );
                }
            }
            CouplingMode::EnergyTransport => {}
            CouplingMode::EnergyTransportComm => {
                for r in &self.roads {
                    c.require(
                        r.comm.is_some(),
                        || format!("roads[{}].comm", r.name),
                        "communication link parameters are required in mode etc",
                    );
                }
            }
        }
        errors.extend(c.errors);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ValidationError { errors })
        }
    }

    /// Resample every series onto the simulation grid in place.
    pub fn resample_series(&mut self) -> Result<(), (String, SeriesError)> {
        let grid = self.grid().map_err(|e| (String::from("dt"), e))?;
        let apply = |field: String, s: &mut TimeSeriesProfile| -> Result<(), (String, SeriesError)> {
            *s = resample(s, &grid).map_err(|e| (field, e))?;
            Ok(())
        };
        let w = &mut self.weather;
        apply("weather.direct_normal".into(), &mut w.direct_normal)?;
        apply("weather.sky_diffuse".into(), &mut w.sky_diffuse)?;
        apply("weather.ground_diffuse".into(), &mut w.ground_diffuse)?;
        apply("weather.cos_incidence".into(), &mut w.cos_incidence)?;
        apply("weather.wind_speed".into(), &mut w.wind_speed)?;
        for b in &mut self.blocks {
            let n = b.name.clone();
            apply(format!("blocks[{n}].charge_probability"), &mut b.charge_probability)?;
            apply(format!("blocks[{n}].building_load"), &mut b.building_load)?;
            if let Some(s) = b.general_load.as_mut() {
                apply(format!("blocks[{n}].general_load"), s)?;
            }
            if let Some(s) = b.prescribed_ev_power.as_mut() {
                apply(format!("blocks[{n}].prescribed_ev_power"), s)?;
            }
            if let Some(s) = b.prescribed_throughput.as_mut() {
                apply(format!("blocks[{n}].prescribed_throughput"), s)?;
            }
        }
        for r in &mut self.roads {
            apply(format!("roads[{}].departures", r.name), &mut r.departures)?;
        }
        Ok(())
    }

    /// Visit every series with its field path.
    pub fn for_each_series(&self, mut f: impl FnMut(&str, &TimeSeriesProfile)) {
        let w = &self.weather;
        f("weather.direct_normal", &w.direct_normal);
        f("weather.sky_diffuse", &w.sky_diffuse);
        f("weather.ground_diffuse", &w.ground_diffuse);
        f("weather.cos_incidence", &w.cos_incidence);
        f("weather.wind_speed", &w.wind_speed);
        for b in &self.blocks {
            f(&format!("blocks[{}].charge_probability", b.name), &b.charge_probability);
            f(&format!("blocks[{}].building_load", b.name), &b.building_load);
            for (key, s) in [
                ("general_load", &b.general_load),
                ("prescribed_ev_power", &b.prescribed_ev_power),
                ("prescribed_throughput", &b.prescribed_throughput),
            ] {
                if let Some(s) = s {
                    f(&format!("blocks[{}].{key}", b.name), s);
                }
            }
        }
        for r in &self.roads {
            f(&format!("roads[{}].departures", r.name), &r.departures);
        }
    }

    fn check_simulation(&self, c: &mut Checker) {
        c.require(self.sim_start.is_finite(), || "sim_start".into(), "must be finite");
        c.require(
            self.sim_end > self.sim_start && self.sim_end.is_finite(),
            || "sim_end".into(),
            "must be finite and greater than sim_start",
        );
        c.positive(self.dt, || "dt".into());
        c.positive(self.coupling_tolerance, || "coupling_tolerance".into());
        c.require(
            self.coupling_max_iters >= 1,
            || "coupling_max_iters".into(),
            "must be >= 1",
        );
        for (i, &(a, b)) in self.commute_windows.iter().enumerate() {
            c.require(
                a < b,
                || format!("commute_windows[{i}]"),
                "window start must precede its end",
            );
        }
        c.require(self.lmp.is_finite(), || "lmp".into(), "must be finite");
    }

    fn check_weather(&self, c: &mut Checker) {
        let w = &self.weather;
        c.series(&w.direct_normal, "weather.direct_normal", 0.0, f64::INFINITY);
        c.series(&w.sky_diffuse, "weather.sky_diffuse", 0.0, f64::INFINITY);
        c.series(&w.ground_diffuse, "weather.ground_diffuse", 0.0, f64::INFINITY);
        c.series(&w.cos_incidence, "weather.cos_incidence", -1.0, 1.0);
        c.series(&w.wind_speed, "weather.wind_speed", 0.0, f64::INFINITY);
    }

    fn check_roads(&self, c: &mut Checker) {
        let mut names = BTreeSet::new();
        for r in &self.roads {
            let p = |f: &str| format!("roads[{}].{f}", r.name);
            if !names.insert(r.name.as_str()) {
                c.fail(p("name"), "duplicate road name");
            }
            for (key, block) in [("from", &r.from), ("to", &r.to)] {
                if self.block_index(block).is_none() {
                    c.fail(p(key), format!("unknown block \"{block}\""));
                }
            }
            c.positive(r.length_m, || p("length_m"));
            c.positive(r.capacity_vph, || p("capacity_vph"));
            c.positive(r.design_speed_mps, || p("design_speed_mps"));
            c.positive(r.alpha1, || p("alpha1"));
            c.positive(r.alpha2, || p("alpha2"));
            c.nonneg(r.alpha3, || p("alpha3"));
            c.series(&r.departures, &p("departures"), 0.0, f64::INFINITY);
            if let Some(link) = &r.comm {
                c.nonneg(link.kappa, || p("comm.kappa"));
                c.nonneg(link.threshold_pps, || p("comm.threshold_pps"));
                c.nonneg(link.packets_per_vehicle, || p("comm.packets_per_vehicle"));
            }
        }
    }

    fn check_community_lines(&self, c: &mut Checker) {
        let mut names = BTreeSet::new();
        let mut fed = BTreeSet::new();
        for l in &self.community_lines {
            let p = |f: &str| format!("community_lines[{}].{f}", l.name);
            if !names.insert(l.name.as_str()) {
                c.fail(p("name"), "duplicate line name");
            }
            for (key, block) in [("from", &l.from), ("to", &l.to)] {
                if self.block_index(block).is_none() {
                    c.fail(p(key), format!("unknown block \"{block}\""));
                }
            }
            if let (Some(a), Some(b)) = (self.block_index(&l.from), self.block_index(&l.to)) {
                c.require(
                    self.blocks[a].feeder.nominal_voltage_v == self.blocks[b].feeder.nominal_voltage_v,
                    || p("to"),
                    "linked blocks must share a nominal voltage",
                );
            }
            if l.from == l.to {
                c.fail(p("to"), "a line cannot join a block to itself");
            }
            if !fed.insert(l.to.as_str()) {
                c.fail(p("to"), format!("block \"{}\" is fed by more than one line", l.to));
            }
            c.nonneg(l.r_ohm, || p("r_ohm"));
            c.require(l.x_ohm.is_finite(), || p("x_ohm"), "must be finite");
            c.require(
                l.r_ohm > 0.0 || l.x_ohm != 0.0,
                || p("x_ohm"),
                "line impedance must be nonzero",
            );
            c.positive(l.limit_w, || p("limit_w"));
        }
        // every block must reach a grid-connected root by walking upstream
        for start in &self.blocks {
            let mut cur = start.name.as_str();
            let mut hops = 0;
            while let Some(l) = self.community_lines.iter().find(|l| l.to == cur) {
                cur = l.from.as_str();
                hops += 1;
                if hops > self.blocks.len() {
                    c.fail(
                        format!("community_lines (block {})", start.name),
                        "community lines form a cycle; the network must be radial",
                    );
                    break;
                }
            }
        }
    }
}

fn check_block(c: &mut Checker, b: &BlockSpec) {
    let p = |f: &str| format!("blocks[{}].{f}", b.name);
    for (i, a) in b.pv.arrays.iter().enumerate() {
        let q = |f: &str| p(&format!("pv.arrays[{i}].{f}"));
        c.nonneg(a.area_m2, || q("area_m2"));
        c.unit(a.active_fraction, || q("active_fraction"));
        c.unit(a.efficiency, || q("efficiency"));
        c.unit(a.inverter_efficiency, || q("inverter_efficiency"));
    }
    let w = &b.wind;
    c.nonneg(w.scale, || p("wind.scale"));
    c.unit(w.inverter_efficiency, || p("wind.inverter_efficiency"));
    c.require(w.curve.len() >= 2, || p("wind.curve"), "needs at least two points");
    for (i, &(speed, power)) in w.curve.iter().enumerate() {
        c.require(
            speed >= 0.0 && power >= 0.0 && speed.is_finite() && power.is_finite(),
            || p(&format!("wind.curve[{i}]")),
            "speed and power must be finite and >= 0",
        );
        if i > 0 && speed <= w.curve[i - 1].0 {
            c.fail(p(&format!("wind.curve[{i}]")), "speeds must be strictly increasing");
        }
    }
    let bat = &b.battery;
    c.positive(bat.capacity_wh, || p("battery.capacity_wh"));
    c.nonneg(bat.max_charge_w, || p("battery.max_charge_w"));
    c.nonneg(bat.max_discharge_w, || p("battery.max_discharge_w"));
    c.nonneg(bat.charge_threshold_w, || p("battery.charge_threshold_w"));
    c.nonneg(bat.discharge_threshold_w, || p("battery.discharge_threshold_w"));
    c.require(
        bat.charge_threshold_w <= bat.discharge_threshold_w,
        || p("battery.charge_threshold_w"),
        "must not exceed discharge_threshold_w",
    );
    c.unit(bat.initial_soc, || p("battery.initial_soc"));
    let cm = &b.comm;
    c.nonneg(cm.e_elec, || p("comm.e_elec"));
    c.nonneg(cm.eps_elec, || p("comm.eps_elec"));
    c.nonneg(cm.distance_m, || p("comm.distance_m"));
    c.nonneg(cm.path_loss_exponent, || p("comm.path_loss_exponent"));
    c.nonneg(b.initial_ev_count, || p("initial_ev_count"));
    c.nonneg(b.ev_charge_power_w, || p("ev_charge_power_w"));
    c.series(&b.charge_probability, &p("charge_probability"), 0.0, 1.0);
    c.series(&b.building_load, &p("building_load"), 0.0, f64::INFINITY);
    if let Some(s) = &b.general_load {
        c.series(s, &p("general_load"), 0.0, f64::INFINITY);
    }
    if let Some(s) = &b.prescribed_ev_power {
        c.series(s, &p("prescribed_ev_power"), 0.0, f64::INFINITY);
    }
    if let Some(s) = &b.prescribed_throughput {
        c.series(s, &p("prescribed_throughput"), 0.0, f64::INFINITY);
    }
    check_feeder(c, b);
}

fn check_feeder(c: &mut Checker, b: &BlockSpec) {
    let p = |f: &str| format!("blocks[{}].feeder.{f}", b.name);
    let f = &b.feeder;
    c.positive(f.nominal_voltage_v, || p("nominal_voltage_v"));
    for (i, l) in f.lines.iter().enumerate() {
        c.nonneg(l.r_ohm, || p(&format!("lines[{i}].r_ohm")));
        c.positive(l.limit_w, || p(&format!("lines[{i}].limit_w")));
    }
    if let Some(slack) = f.buses.iter().find(|bus| bus.id == f.slack) {
        c.require(
            slack.kind == LoadKind::None,
            || p("slack"),
            "the slack bus cannot carry a load attachment",
        );
    }
    let mut required = alloc::vec![
        LoadKind::Building,
        LoadKind::Ev,
        LoadKind::Comm,
        LoadKind::Generation,
        LoadKind::Storage
    ];
    if b.general_load.is_some() {
        required.push(LoadKind::General);
    }
    for kind in required {
        c.require(
            f.buses.iter().any(|bus| bus.kind == kind && bus.id != f.slack),
            || p("buses"),
            match kind {
                LoadKind::Building => "no bus with kind \"building\"",
                LoadKind::Ev => "no bus with kind \"ev\"",
                LoadKind::Comm => "no bus with kind \"comm\"",
                LoadKind::Generation => "no bus with kind \"generation\"",
                LoadKind::Storage => "no bus with kind \"storage\"",
                _ => "no bus with kind \"general\"",
            },
        );
    }
    if let Err(e) = FeederNetwork::from_spec(f) {
        c.fail(p("lines"), format!("{e}"));
    }
}

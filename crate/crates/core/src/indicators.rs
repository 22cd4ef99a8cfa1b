//! Performance indicators computed from a trace: peak-valley load ratio,
//! load cover factor, bus-voltage and line-rating violation indices, and
//! road / transmission congestion.
//!
//! Traces are sampled once per step and rates are held over the step, so
//! energies are sums of samples times the (uniform) step and the step cancels
//! in every ratio below.

use alloc::string::String;
use alloc::vec::Vec;

use crate::engine::TraceSet;

/// Allowed voltage band, per unit.
pub const VOLTAGE_BAND: (f64, f64) = (0.95, 1.05);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IndicatorError {
    #[error("no samples")]
    Empty,
    #[error("peak grid power is zero; the peak-valley ratio is undefined")]
    ZeroPeak,
    #[error("total demand is zero; the load cover factor is undefined")]
    ZeroDemand,
    #[error("line {0} has a nonpositive rating")]
    NonPositiveLimit(usize),
    #[error("series lengths differ")]
    LengthMismatch,
}

/// Peak-valley load ratio of a grid power series, %.
pub fn pvlr(grid_power: &[f64]) -> Result<f64, IndicatorError> {
    if grid_power.is_empty() {
        return Err(IndicatorError::Empty);
    }
    let max = grid_power.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = grid_power.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        return Err(IndicatorError::ZeroPeak);
    }
    Ok(100.0 * (max - min) / max)
}

/// Share of demand energy covered by renewable generation, %.
pub fn lcf(renewable: &[f64], demand: &[f64]) -> Result<f64, IndicatorError> {
    if renewable.len() != demand.len() {
        return Err(IndicatorError::LengthMismatch);
    }
    let total_demand: f64 = demand.iter().sum();
    if !(total_demand > 0.0) {
        return Err(IndicatorError::ZeroDemand);
    }
    Ok(100.0 * renewable.iter().sum::<f64>() / total_demand)
}

fn band_violation(v: f64) -> f64 {
    let (lo, hi) = VOLTAGE_BAND;
    if v > hi {
        v - hi
    } else if v < lo {
        lo - v
    } else {
        0.0
    }
}

/// Mean voltage-band violation over buses and steps. `voltages[step][bus]`
/// in per unit.
pub fn si_b<R: AsRef<[f64]>>(voltages: &[R]) -> Result<f64, IndicatorError> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for row in voltages {
        for &v in row.as_ref() {
            sum += band_violation(v);
            count += 1;
        }
    }
    if count == 0 {
        return Err(IndicatorError::Empty);
    }
    Ok(sum / count as f64)
}

/// Mean line-rating excess over lines and steps, in per unit of each line's
/// rating. `powers[step][line]` in W; flow direction does not matter.
pub fn si_l<R: AsRef<[f64]>>(powers: &[R], limits: &[f64]) -> Result<f64, IndicatorError> {
    if let Some(i) = limits.iter().position(|&l| !(l > 0.0)) {
        return Err(IndicatorError::NonPositiveLimit(i));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for row in powers {
        let row = row.as_ref();
        if row.len() != limits.len() {
            return Err(IndicatorError::LengthMismatch);
        }
        for (&p, &limit) in row.iter().zip(limits) {
            let excess = libm::fabs(p) - limit;
            if excess > 0.0 {
                sum += excess / limit;
            }
            count += 1;
        }
    }
    if count == 0 {
        return Err(IndicatorError::Empty);
    }
    Ok(sum / count as f64)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RoadCongestion {
    pub road: String,
    pub mean_travel_time_s: f64,
    pub peak_travel_time_s: f64,
    pub peak_travel_time_at_s: f64,
    pub mean_packet_loss: f64,
    pub peak_packet_loss: f64,
    pub peak_packet_loss_at_s: f64,
}

/// Mean, maximum and time of the first maximum.
fn summary(times: &[f64], values: &[f64]) -> (f64, f64, f64) {
    let mut peak = f64::NEG_INFINITY;
    let mut at = f64::NAN;
    for (&t, &v) in times.iter().zip(values) {
        if v > peak {
            peak = v;
            at = t;
        }
    }
    (values.iter().sum::<f64>() / values.len() as f64, peak, at)
}

/// Travel-time and packet-loss summaries of every road.
pub fn congestion(trace: &TraceSet) -> Vec<RoadCongestion> {
    if trace.is_empty() {
        return Vec::new();
    }
    let times = trace.times();
    (0..trace.roads.len())
        .map(|r| {
            let (mean_t, peak_t, peak_t_at) = summary(&times, &trace.road_series(r, |x| x.travel_time));
            let (mean_g, peak_g, peak_g_at) = summary(&times, &trace.road_series(r, |x| x.packet_loss));
            RoadCongestion {
                road: trace.roads[r].clone(),
                mean_travel_time_s: mean_t,
                peak_travel_time_s: peak_t,
                peak_travel_time_at_s: peak_t_at,
                mean_packet_loss: mean_g,
                peak_packet_loss: peak_g,
                peak_packet_loss_at_s: peak_g_at,
            }
        })
        .collect()
}

/// Energy indicators of one block or of the whole community. `None` where
/// the indicator is undefined for the trace.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EnergyIndicators {
    pub name: String,
    /// %
    pub pvlr: Option<f64>,
    /// %
    pub lcf: Option<f64>,
    pub si_b: Option<f64>,
    pub si_l: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IndicatorReport {
    pub blocks: Vec<EnergyIndicators>,
    pub community: EnergyIndicators,
    pub roads: Vec<RoadCongestion>,
}

fn energy_indicators(
    trace: &TraceSet,
    name: String,
    grid: Vec<f64>,
    renewable: Vec<f64>,
    demand: Vec<f64>,
    bus_filter: impl Fn(usize) -> bool,
    line_filter: impl Fn(usize) -> bool,
) -> EnergyIndicators {
    let buses: Vec<usize> = (0..trace.buses.len()).filter(|&i| bus_filter(i)).collect();
    let lines: Vec<usize> = (0..trace.lines.len()).filter(|&i| line_filter(i)).collect();
    let voltages: Vec<Vec<f64>> = trace
        .records
        .iter()
        .map(|r| buses.iter().map(|&i| r.bus_voltage[i]).collect())
        .collect();
    let powers: Vec<Vec<f64>> = trace
        .records
        .iter()
        .map(|r| lines.iter().map(|&i| r.line_power[i]).collect())
        .collect();
    let limits: Vec<f64> = lines.iter().map(|&i| trace.lines[i].limit_w).collect();
    EnergyIndicators {
        name,
        pvlr: pvlr(&grid).ok(),
        lcf: lcf(&renewable, &demand).ok(),
        si_b: si_b(&voltages).ok(),
        si_l: si_l(&powers, &limits).ok(),
    }
}

/// Per-block and community indicators of a trace. Block terminals are left
/// out of the voltage index: the grid-connected ones are held at nominal.
pub fn report(trace: &TraceSet) -> IndicatorReport {
    let blocks = (0..trace.blocks.len())
        .map(|b| {
            energy_indicators(
                trace,
                trace.blocks[b].clone(),
                trace.block_series(b, |x| x.grid_power),
                trace.block_series(b, |x| x.renewable()),
                trace.block_series(b, |x| x.demand()),
                |i| trace.buses[i].block == b && !trace.buses[i].terminal,
                |i| trace.lines[i].block == Some(b),
            )
        })
        .collect();
    let sum = |f: fn(&crate::engine::BlockRecord) -> f64| -> Vec<f64> {
        trace.records.iter().map(|r| r.blocks.iter().map(f).sum()).collect()
    };
    let community = energy_indicators(
        trace,
        String::from("community"),
        trace.records.iter().map(|r| r.community_grid_power).collect(),
        sum(|x| x.renewable()),
        sum(|x| x.demand()),
        |i| !trace.buses[i].terminal,
        |_| true,
    );
    IndicatorReport {
        blocks,
        community,
        roads: congestion(trace),
    }
}

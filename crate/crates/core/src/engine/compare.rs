//! Per-step relative deviation between two runs of the same quantity.

use alloc::string::String;
use alloc::vec::Vec;

use super::trace::QuantityTable;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompareError {
    #[error("time grids differ: {0}")]
    GridMismatch(String),
    #[error("elements differ: {0}")]
    ColumnMismatch(String),
    #[error("quantities differ: {a} vs {b}")]
    QuantityMismatch { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub quantity: String,
    pub columns: Vec<String>,
    pub times: Vec<f64>,
    /// `100 * |b - a| / |a|` per step and element, %.
    pub deviations: Vec<Vec<f64>>,
    /// Largest deviation, %, with where it happened.
    pub peak: f64,
    pub peak_time: Option<f64>,
    pub peak_column: Option<String>,
    /// Mean over every step and element, %.
    pub mean: f64,
}

/// Relative deviation of `b` from the reference `a`, %. A zero reference
/// falls back to `|b|` as the scale so the value stays finite.
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    let diff = libm::fabs(b - a);
    if diff == 0.0 {
        return 0.0;
    }
    let scale = if a != 0.0 { libm::fabs(a) } else { libm::fabs(b) };
    100.0 * diff / scale
}

/// Times closer than this (relative to the step) count as the same instant.
const TIME_MATCH: f64 = 1e-9;

pub fn compare(a: &QuantityTable, b: &QuantityTable) -> Result<DeviationReport, CompareError> {
    if a.quantity != b.quantity {
        return Err(CompareError::QuantityMismatch {
            a: a.quantity.clone(),
            b: b.quantity.clone(),
        });
    }
    if a.times.len() != b.times.len() {
        return Err(CompareError::GridMismatch(alloc::format!(
            "{} steps vs {} steps",
            a.times.len(),
            b.times.len()
        )));
    }
    let span = a.times.last().copied().unwrap_or(0.0) - a.times.first().copied().unwrap_or(0.0);
    let scale = span.abs().max(1.0);
    if let Some(k) = a
        .times
        .iter()
        .zip(&b.times)
        .position(|(ta, tb)| libm::fabs(ta - tb) > TIME_MATCH * scale)
    {
        return Err(CompareError::GridMismatch(alloc::format!(
            "step {k} is at t={} s vs t={} s",
            a.times[k],
            b.times[k]
        )));
    }
    if a.columns != b.columns {
        return Err(CompareError::ColumnMismatch(alloc::format!(
            "[{}] vs [{}]",
            a.columns.join(","),
            b.columns.join(",")
        )));
    }

    let mut peak = 0.0;
    let mut peak_at = None;
    let mut sum = 0.0;
    let mut count = 0usize;
    let deviations: Vec<Vec<f64>> = a
        .values
        .iter()
        .zip(&b.values)
        .enumerate()
        .map(|(k, (ra, rb))| {
            ra.iter()
                .zip(rb)
                .enumerate()
                .map(|(j, (&va, &vb))| {
                    let d = relative_deviation(va, vb);
                    sum += d;
                    count += 1;
                    if peak_at.is_none() || d > peak {
                        peak = d;
                        peak_at = Some((k, j));
                    }
                    d
                })
                .collect()
        })
        .collect();
    Ok(DeviationReport {
        quantity: a.quantity.clone(),
        columns: a.columns.clone(),
        times: a.times.clone(),
        deviations,
        peak,
        peak_time: peak_at.map(|(k, _)| a.times[k]),
        peak_column: peak_at.map(|(_, j)| a.columns[j].clone()),
        mean: if count == 0 { 0.0 } else { sum / count as f64 },
    })
}

//! Time series carried by a scenario (weather, loads, probabilities, traffic
//! departures) and their resampling onto the simulation grid.

use alloc::vec::Vec;

/// How values between two samples are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Interpolation {
    /// Hold the previous sample until the next one.
    #[cfg_attr(feature = "serde", serde(alias = "step"))]
    StepHold,
    #[default]
    Linear,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("time series has no samples")]
    Empty,
    #[error("sample times must be strictly increasing (sample {index} at t={time})")]
    NotIncreasing { index: usize, time: f64 },
    #[error("sample {index} is not finite")]
    NotFinite { index: usize },
    #[error("series spans [{first}, {last}] s and cannot reach grid [{start}, {end}] s")]
    Coverage {
        first: f64,
        last: f64,
        start: f64,
        end: f64,
    },
    #[error("invalid grid: start={start}, end={end}, dt={dt}")]
    InvalidGrid { start: f64, end: f64, dt: f64 },
}

/// Uniform simulation grid `start, start + dt, ...` up to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub dt: f64,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, dt: f64) -> Result<Self, SeriesError> {
        if !(dt > 0.0) || !start.is_finite() || !end.is_finite() || end < start {
            return Err(SeriesError::InvalidGrid { start, end, dt });
        }
        Ok(Self { start, end, dt })
    }

    /// Number of steps that fit in the window. A window that is an integer
    /// multiple of `dt` up to rounding noise is not shortened by one.
    pub fn steps(&self) -> usize {
        let n = (self.end - self.start) / self.dt;
        let rounded = libm::round(n);
        if libm::fabs(n - rounded) <= 1e-9 * rounded.max(1.0) {
            rounded as usize
        } else {
            libm::floor(n) as usize
        }
    }

    /// Number of grid points, `steps() + 1`.
    pub fn points(&self) -> usize {
        self.steps() + 1
    }

    /// Time of grid point `k`. Computed from the index, never accumulated.
    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.dt
    }
}

/// An ordered list of `(time s, value)` samples with an interpolation rule.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct TimeSeriesProfile {
    pub samples: Vec<(f64, f64)>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub interpolation: Interpolation,
}

impl TimeSeriesProfile {
    pub fn new(samples: Vec<(f64, f64)>, interpolation: Interpolation) -> Result<Self, SeriesError> {
        let profile = Self { samples, interpolation };
        profile.check()?;
        Ok(profile)
    }

    /// A single-sample profile, which holds its value everywhere.
    pub fn constant(value: f64) -> Self {
        Self {
            samples: alloc::vec![(0.0, value)],
            interpolation: Interpolation::StepHold,
        }
    }

    pub fn check(&self) -> Result<(), SeriesError> {
        if self.samples.is_empty() {
            return Err(SeriesError::Empty);
        }
        for (index, &(t, v)) in self.samples.iter().enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(SeriesError::NotFinite { index });
            }
            if index > 0 && t <= self.samples[index - 1].0 {
                return Err(SeriesError::NotIncreasing { index, time: t });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Value of sample `k`; for profiles resampled onto a grid this is the
    /// value at grid point `k`.
    pub fn value(&self, k: usize) -> f64 {
        self.samples[k].1
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    /// Evaluate the profile at `t`, holding the boundary values outside the
    /// sampled span. Exact sample times return the stored value bit for bit.
    pub fn evaluate(&self, t: f64) -> f64 {
        let s = &self.samples;
        if t <= s[0].0 {
            return s[0].1;
        }
        let last = s.len() - 1;
        if t >= s[last].0 {
            return s[last].1;
        }
        // index of the last sample with time <= t
        let i = s.partition_point(|&(ts, _)| ts <= t) - 1;
        let (t0, v0) = s[i];
        if t == t0 {
            return v0;
        }
        match self.interpolation {
            Interpolation::StepHold => v0,
            Interpolation::Linear => {
                let (t1, v1) = s[i + 1];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    pub fn min_value(&self) -> f64 {
        self.values().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Resample `profile` onto every point of `grid`.
///
/// Boundary values are held outside the sampled span. A multi-sample profile
/// whose span does not overlap the grid at all is rejected: that almost
/// always means a unit mistake in the time column.
pub fn resample(profile: &TimeSeriesProfile, grid: &TimeGrid) -> Result<TimeSeriesProfile, SeriesError> {
    profile.check()?;
    let first = profile.samples[0].0;
    let last = profile.samples[profile.samples.len() - 1].0;
    let grid_last = grid.time(grid.steps());
    if profile.len() > 1 && (grid_last < first || grid.start > last) {
        return Err(SeriesError::Coverage {
            first,
            last,
            start: grid.start,
            end: grid.end,
        });
    }
    let samples = (0..grid.points())
        .map(|k| {
            let t = grid.time(k);
            (t, profile.evaluate(t))
        })
        .collect();
    Ok(TimeSeriesProfile {
        samples,
        interpolation: profile.interpolation,
    })
}

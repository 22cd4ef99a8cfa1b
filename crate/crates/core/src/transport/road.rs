//! Macroscopic road model.
//!
//! Average velocity follows an empirical flow-velocity correlation, average
//! flow is velocity times density, and the two are solved together for the
//! vehicles currently on the road. Outflow is the inflow delayed by the
//! current travel time. The delay is applied to the cumulative inflow count
//! rather than to the instantaneous rate, so every vehicle that enters
//! eventually leaves even when the travel time changes while it is en route.

use alloc::collections::VecDeque;

use crate::scenario::RoadSpec;
use crate::SECONDS_PER_HOUR;

/// Relative tolerance of the velocity/flow fixed point.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;
pub const FIXED_POINT_MAX_ITERS: usize = 100;
const DAMPING: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoadError {
    #[error("velocity/flow fixed point did not converge after {iterations} iterations (residual {residual:.3e} m/s)")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid road step input: {0}")]
    InvalidInput(&'static str),
}

/// Average velocity, m/s, at average flow `v_ave` vehicles/h.
pub fn road_velocity(v_ave: f64, spec: &RoadSpec) -> f64 {
    let load = v_ave / spec.capacity_vph;
    let beta = spec.alpha2 + spec.alpha3 * load * load * load;
    spec.alpha1 * spec.design_speed_mps / (1.0 + libm::pow(load, beta))
}

pub fn free_flow_speed(spec: &RoadSpec) -> f64 {
    spec.alpha1 * spec.design_speed_mps
}

/// Solve `U = road_velocity(V)` with `V = U * vehicles / L` (converted to
/// vehicles/h). Returns `(U m/s, V vehicles/h)`.
///
/// Damped fixed-point iteration, safeguarded by the bracket `(0, free flow]`
/// that always contains the unique root: whenever the damped update leaves
/// the bracket or stalls, the bracket is bisected instead.
pub fn solve_velocity(vehicles: f64, spec: &RoadSpec, guess: f64) -> Result<(f64, f64), RoadError> {
    let free = free_flow_speed(spec);
    if vehicles <= 0.0 {
        return Ok((free, 0.0));
    }
    // vehicles/h of flow per m/s of speed
    let k = vehicles / spec.length_m * SECONDS_PER_HOUR;
    let (mut lo, mut hi) = (0.0, free);
    let mut u = if guess > 0.0 && guess <= free { guess } else { free };
    let mut last_residual = f64::INFINITY;
    for iteration in 1..=FIXED_POINT_MAX_ITERS {
        let g = road_velocity(u * k, spec);
        let residual = u - g;
        if libm::fabs(residual) <= FIXED_POINT_TOLERANCE * u || hi - lo <= f64::EPSILON * hi {
            return Ok((u, u * k));
        }
        if residual < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let damped = (1.0 - DAMPING) * u + DAMPING * g;
        let next = if damped > lo && damped < hi && libm::fabs(residual) <= 0.5 * last_residual {
            damped
        } else {
            0.5 * (lo + hi)
        };
        last_residual = libm::fabs(residual);
        if !next.is_finite() {
            return Err(RoadError::NotConverged {
                iterations: iteration,
                residual,
            });
        }
        u = next;
    }
    Err(RoadError::NotConverged {
        iterations: FIXED_POINT_MAX_ITERS,
        residual: last_residual,
    })
}

/// Traffic state of one road.
#[derive(Debug, Clone, PartialEq)]
pub struct RoadState {
    /// `(time s, cumulative vehicles that entered by then)`, oldest first.
    /// Entries no longer reachable by a delayed lookup are pruned.
    history: VecDeque<(f64, f64)>,
    cumulative_in: f64,
    cumulative_out: f64,
    /// Vehicles on the road.
    pub vehicles: f64,
    /// Average velocity used over the last step, m/s.
    pub u_ave: f64,
    /// Average flow used over the last step, vehicles/h.
    pub v_ave: f64,
    /// Travel time used over the last step, s.
    pub t_travel: f64,
    /// Inflow over the last step, vehicles/h.
    pub q_in: f64,
    /// Outflow over the last step, vehicles/h.
    pub q_out: f64,
}

impl RoadState {
    /// An empty road at time `t0`.
    pub fn empty(spec: &RoadSpec, t0: f64) -> Self {
        let free = free_flow_speed(spec);
        Self {
            history: VecDeque::from([(t0, 0.0)]),
            cumulative_in: 0.0,
            cumulative_out: 0.0,
            vehicles: 0.0,
            u_ave: free,
            v_ave: 0.0,
            t_travel: spec.length_m / free,
            q_in: 0.0,
            q_out: 0.0,
        }
    }

    /// Vehicles that have left the road since `t0`.
    pub fn delivered(&self) -> f64 {
        self.cumulative_out
    }

    /// Vehicles that have entered the road since `t0`.
    pub fn entered(&self) -> f64 {
        self.cumulative_in
    }

    pub fn history_len(&self) -> usize {
        self.history.len()
    }

    /// Cumulative inflow at time `t`, linear between recorded points.
    fn cumulative_at(&self, t: f64) -> f64 {
        let h = &self.history;
        let (t_first, a_first) = h[0];
        if t <= t_first {
            return a_first;
        }
        let (t_last, a_last) = h[h.len() - 1];
        if t >= t_last {
            return a_last;
        }
        let i = h.partition_point(|&(ts, _)| ts <= t) - 1;
        let (t0, a0) = h[i];
        let (t1, a1) = h[i + 1];
        a0 + (a1 - a0) * (t - t0) / (t1 - t0)
    }

    /// Drop history that lies entirely below the vehicles already delivered.
    fn prune(&mut self) {
        while self.history.len() > 2 && self.history[1].1 <= self.cumulative_out {
            self.history.pop_front();
        }
    }
}

/// Advance `state` from `t` to `t + dt` with inflow `q_in` vehicles/h.
///
/// `delay_factor >= 1` stretches the travel time; 1 means no communication
/// degradation.
pub fn road_step(
    state: &RoadState,
    q_in: f64,
    delay_factor: f64,
    spec: &RoadSpec,
    t: f64,
    dt: f64,
) -> Result<RoadState, RoadError> {
    if !(dt > 0.0) {
        return Err(RoadError::InvalidInput("dt must be positive"));
    }
    if !(delay_factor >= 1.0) {
        return Err(RoadError::InvalidInput("delay factor must be >= 1"));
    }
    if !(q_in >= 0.0) {
        return Err(RoadError::InvalidInput("inflow must be >= 0"));
    }
    let (u_ave, v_ave) = solve_velocity(state.vehicles, spec, state.u_ave)?;
    let t_travel = delay_factor * spec.length_m / u_ave;

    let mut next = state.clone();
    let entered = state.cumulative_in + q_in * dt / SECONDS_PER_HOUR;
    next.history.push_back((t + dt, entered));
    next.cumulative_in = entered;
    let reached = next.cumulative_at(t + dt - t_travel);
    let delivered = reached.clamp(state.cumulative_out, entered);
    next.cumulative_out = delivered;
    next.vehicles = entered - delivered;
    next.u_ave = u_ave;
    next.v_ave = v_ave;
    next.t_travel = t_travel;
    next.q_in = q_in;
    next.q_out = (delivered - state.cumulative_out) * SECONDS_PER_HOUR / dt;
    next.prune();
    Ok(next)
}

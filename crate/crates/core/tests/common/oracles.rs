//! Independent reference computations used to check the solvers.
#![allow(dead_code)]

use num_complex::Complex64;

/// Voltage (pu) of the load bus of a 2-bus feeder with real impedance `z`
/// (pu), constant-power load `p` (pu) and the slack at 1 pu. Solves
/// `V (1 - V) / z = p` on the high-voltage branch by bisection.
pub fn two_bus_voltage(z: f64, p: f64) -> f64 {
    let g = |v: f64| v * (1.0 - v) / z - p;
    let (mut lo, mut hi) = (0.5, 1.0);
    assert!(g(lo) > 0.0, "load beyond the nose of the PV curve");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Grid power (pu) of the same 2-bus feeder: slack voltage times line current.
pub fn two_bus_grid_power(z: f64, p: f64) -> f64 {
    (1.0 - two_bus_voltage(z, p)) / z
}

/// Radial network in per unit: bus 0 is the slack at 1 pu, bus `i > 0` hangs
/// from `parent[i]` through `z[i]` and consumes `p[i]`.
#[derive(Debug, Clone)]
pub struct RadialCase {
    pub parent: Vec<usize>,
    pub z: Vec<Complex64>,
    pub p: Vec<f64>,
}

/// Newton-Raphson on the nodal current equations `Y V + conj(p / V) = 0`
/// with a finite-difference Jacobian. Returns bus voltages and grid power.
pub fn newton_power_flow(case: &RadialCase) -> (Vec<Complex64>, f64) {
    let n = case.parent.len();
    let mut y = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 1..n {
        let a = 1.0 / case.z[i];
        let j = case.parent[i];
        y[i][i] += a;
        y[j][j] += a;
        y[i][j] -= a;
        y[j][i] -= a;
    }
    let currents =
        |v: &[Complex64]| -> Vec<Complex64> { (0..n).map(|i| (0..n).map(|j| y[i][j] * v[j]).sum()).collect() };
    let residual = |x: &[f64]| -> Vec<f64> {
        let mut v = vec![Complex64::new(1.0, 0.0)];
        v.extend((0..n - 1).map(|i| Complex64::new(x[2 * i], x[2 * i + 1])));
        let inj = currents(&v);
        let mut f = Vec::with_capacity(2 * (n - 1));
        for i in 1..n {
            let r = inj[i] + (Complex64::new(case.p[i], 0.0) / v[i]).conj();
            f.push(r.re);
            f.push(r.im);
        }
        f
    };
    let m = 2 * (n - 1);
    let mut x: Vec<f64> = (0..m).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect();
    for _ in 0..60 {
        let f = residual(&x);
        let h = 1e-7;
        let mut jac = vec![vec![0.0; m]; m];
        for c in 0..m {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[c] += h;
            xm[c] -= h;
            let (fp, fm) = (residual(&xp), residual(&xm));
            for r in 0..m {
                jac[r][c] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        let dx = gauss_solve(jac, f.iter().map(|v| -v).collect());
        let step = dx.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        if step < 1e-15 {
            break;
        }
    }
    let mut v = vec![Complex64::new(1.0, 0.0)];
    v.extend((0..n - 1).map(|i| Complex64::new(x[2 * i], x[2 * i + 1])));
    let s0 = v[0] * currents(&v)[0].conj();
    (v, s0.re)
}

fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for (offset, row) in lower.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[col + 1 + offset] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Road parameters for [`road_first_arrival`].
#[derive(Clone, Copy)]
pub struct RoadParams {
    pub length_m: f64,
    pub capacity_vph: f64,
    pub design_speed_mps: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

fn velocity(v: f64, r: &RoadParams) -> f64 {
    let x = v / r.capacity_vph;
    r.alpha1 * r.design_speed_mps / (1.0 + x.powf(r.alpha2 + r.alpha3 * x * x * x))
}

/// Velocity at `vehicles` on the road by bisection on `U - velocity(U N / L)`.
fn road_speed(vehicles: f64, r: &RoadParams) -> f64 {
    let (mut lo, mut hi) = (0.0, r.alpha1 * r.design_speed_mps);
    if vehicles <= 0.0 {
        return hi;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid - velocity(mid * vehicles / r.length_m * 3600.0, r) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Fine-step simulation of a road fed at constant `q_in` (vehicles/h) from
/// empty: outflow is the cumulative inflow delayed by the current travel
/// time. Returns `(first arrival time s, outflow rate at t_end vehicles/h)`.
pub fn road_first_arrival(r: &RoadParams, q_in: f64, delay: f64, t_end: f64, h: f64) -> (f64, f64) {
    let mut t = 0.0;
    let mut vehicles = 0.0;
    let mut delivered = 0.0;
    let mut first = f64::NAN;
    let mut rate = 0.0;
    while t < t_end {
        let tau = delay * r.length_m / road_speed(vehicles, r);
        let reached = (q_in * (t + h - tau).max(0.0) / 3600.0).max(delivered);
        rate = (reached - delivered) * 3600.0 / h;
        if first.is_nan() && reached > 0.0 {
            first = t + h;
        }
        delivered = reached;
        t += h;
        vehicles = q_in * t / 3600.0 - delivered;
    }
    (first, rate)
}

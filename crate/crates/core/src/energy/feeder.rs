//! Radial distribution feeder and its backward-forward sweep power flow.
//!
//! Balanced single-phase, quasi-static. Loads are constant active power and
//! are converted to currents at the latest voltage estimate on each sweep.
//! Every line obeys `V_from - V_to = Z * I` with `I` flowing from `from` to
//! `to`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::scenario::FeederSpec;

/// What a bus feeds. Each block quantity is split evenly across the buses
/// that carry its kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum LoadKind {
    Building,
    Ev,
    General,
    Comm,
    /// PV and wind output (negative consumption).
    Generation,
    /// Battery exchange.
    Storage,
    #[default]
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bus {
    pub id: String,
    pub kind: LoadKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub from: usize,
    pub to: usize,
    pub impedance: Complex64,
    /// Active power rating, W.
    pub limit_w: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeederError {
    #[error("network has no buses")]
    Empty,
    #[error("duplicate bus id \"{0}\"")]
    DuplicateBus(String),
    #[error("line {line} references unknown bus \"{bus}\"")]
    UnknownBus { line: usize, bus: String },
    #[error("slack bus \"{0}\" is not defined")]
    UnknownSlack(String),
    #[error("line {0} has negative resistance")]
    NegativeResistance(usize),
    #[error("network is not radial: {buses} buses need {expected} lines, found {lines}")]
    LineCount {
        buses: usize,
        lines: usize,
        expected: usize,
    },
    #[error("network is not radial: bus \"{0}\" is unreachable from the slack bus")]
    Unreachable(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PowerFlowError {
    #[error("power flow did not converge after {iterations} sweeps (last voltage change {mismatch_pu:.3e} pu)")]
    NotConverged { iterations: usize, mismatch_pu: f64 },
    #[error("voltage collapse at bus \"{bus}\" (loading is infeasible)")]
    Collapse { bus: String },
    #[error("expected {expected} injections, got {got}")]
    InjectionCount { expected: usize, got: usize },
}

/// Radial bus/line graph rooted at a single slack bus.
#[derive(Debug, Clone, PartialEq)]
pub struct FeederNetwork {
    buses: Vec<Bus>,
    lines: Vec<Line>,
    slack: usize,
    nominal_voltage: f64,
    /// Buses in breadth-first order from the slack bus.
    order: Vec<usize>,
    /// Line feeding each bus from upstream (`None` for the slack bus).
    feeding_line: Vec<Option<usize>>,
    /// Upstream neighbour of each bus.
    parent: Vec<usize>,
}

impl FeederNetwork {
    pub fn new(buses: Vec<Bus>, lines: Vec<Line>, slack: usize, nominal_voltage: f64) -> Result<Self, FeederError> {
        if buses.is_empty() {
            return Err(FeederError::Empty);
        }
        let mut seen = BTreeMap::new();
        for (i, b) in buses.iter().enumerate() {
            if seen.insert(b.id.as_str(), i).is_some() {
                return Err(FeederError::DuplicateBus(b.id.clone()));
            }
        }
        for (i, l) in lines.iter().enumerate() {
            if l.impedance.re < 0.0 {
                return Err(FeederError::NegativeResistance(i));
            }
        }
        if lines.len() + 1 != buses.len() {
            return Err(FeederError::LineCount {
                buses: buses.len(),
                lines: lines.len(),
                expected: buses.len() - 1,
            });
        }
        let mut adjacency = vec![Vec::new(); buses.len()];
        for (i, l) in lines.iter().enumerate() {
            adjacency[l.from].push((l.to, i));
            adjacency[l.to].push((l.from, i));
        }
        let mut feeding_line = vec![None; buses.len()];
        let mut parent = vec![usize::MAX; buses.len()];
        let mut visited = vec![false; buses.len()];
        let mut order = Vec::with_capacity(buses.len());
        let mut queue = VecDeque::from([slack]);
        visited[slack] = true;
        parent[slack] = slack;
        while let Some(b) = queue.pop_front() {
            order.push(b);
            for &(next, line) in &adjacency[b] {
                if !visited[next] {
                    visited[next] = true;
                    parent[next] = b;
                    feeding_line[next] = Some(line);
                    queue.push_back(next);
                }
            }
        }
        if let Some(i) = visited.iter().position(|v| !v) {
            return Err(FeederError::Unreachable(buses[i].id.clone()));
        }
        Ok(Self {
            buses,
            lines,
            slack,
            nominal_voltage,
            order,
            feeding_line,
            parent,
        })
    }

    pub fn from_spec(spec: &FeederSpec) -> Result<Self, FeederError> {
        let index: BTreeMap<&str, usize> = spec.buses.iter().enumerate().map(|(i, b)| (b.id.as_str(), i)).collect();
        let slack = *index
            .get(spec.slack.as_str())
            .ok_or_else(|| FeederError::UnknownSlack(spec.slack.clone()))?;
        let lookup = |line: usize, id: &String| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| FeederError::UnknownBus { line, bus: id.clone() })
        };
        let lines = spec
            .lines
            .iter()
            .enumerate()
            .map(|(i, l)| {
                Ok(Line {
                    from: lookup(i, &l.from)?,
                    to: lookup(i, &l.to)?,
                    impedance: Complex64::new(l.r_ohm, l.x_ohm),
                    limit_w: l.limit_w,
                })
            })
            .collect::<Result<Vec<_>, FeederError>>()?;
        let buses = spec
            .buses
            .iter()
            .map(|b| Bus {
                id: b.id.clone(),
                kind: b.kind,
            })
            .collect();
        Self::new(buses, lines, slack, spec.nominal_voltage_v)
    }

    pub fn buses(&self) -> &[Bus] {
        &self.buses
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn slack(&self) -> usize {
        self.slack
    }

    pub fn nominal_voltage(&self) -> f64 {
        self.nominal_voltage
    }

    /// Line feeding `bus` from upstream.
    pub fn feeding_line(&self, bus: usize) -> Option<usize> {
        self.feeding_line[bus]
    }

    /// Buses in breadth-first order from the slack bus.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Current on `line` oriented from the slack side to the far side.
    fn downstream_sign(&self, line: usize) -> f64 {
        let l = &self.lines[line];
        if self.parent[l.to] == l.from && self.feeding_line[l.to] == Some(line) {
            1.0
        } else {
            -1.0
        }
    }

    /// The bus on the far side of `line` as seen from the slack bus.
    fn downstream_bus(&self, line: usize) -> usize {
        let l = &self.lines[line];
        if self.feeding_line[l.to] == Some(line) {
            l.to
        } else {
            l.from
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Convergence threshold on the largest voltage update, per unit of the
    /// nominal voltage.
    pub tolerance_pu: f64,
    pub max_iterations: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            tolerance_pu: 1e-8,
            max_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerFlowSolution {
    pub bus_voltages: Vec<Complex64>,
    /// Current on each line in its `from -> to` direction.
    pub line_currents: Vec<Complex64>,
    /// Active power entering each line at its `from` end, W.
    pub line_active_power: Vec<f64>,
    /// Active power delivered by the slack bus; positive when drawn from the
    /// grid.
    pub grid_power: f64,
    pub iterations: usize,
}

impl PowerFlowSolution {
    /// `|I|^2 R` of every line, W.
    pub fn line_losses<'a>(&'a self, net: &'a FeederNetwork) -> impl Iterator<Item = f64> + 'a {
        self.line_currents
            .iter()
            .zip(net.lines())
            .map(|(i, l)| i.norm_sqr() * l.impedance.re)
    }

    /// Current mismatch at each non-slack bus: current in from upstream
    /// minus currents out to loads and downstream lines, A.
    pub fn kcl_residuals(&self, net: &FeederNetwork, injections: &[f64]) -> Vec<f64> {
        let mut net_in = vec![Complex64::new(0.0, 0.0); net.buses.len()];
        for (k, l) in net.lines.iter().enumerate() {
            net_in[l.to] += self.line_currents[k];
            net_in[l.from] -= self.line_currents[k];
        }
        (0..net.buses.len())
            .filter(|&b| b != net.slack)
            .map(|b| (net_in[b] - load_current(injections[b], self.bus_voltages[b])).norm())
            .collect()
    }

    /// `|V_from - V_to - Z I|` for every line, V.
    pub fn line_residuals(&self, net: &FeederNetwork) -> Vec<f64> {
        net.lines
            .iter()
            .zip(&self.line_currents)
            .map(|(l, i)| (self.bus_voltages[l.from] - self.bus_voltages[l.to] - l.impedance * i).norm())
            .collect()
    }
}

fn load_current(p: f64, v: Complex64) -> Complex64 {
    if p == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(p, 0.0) / v.conj()
    }
}

/// [`solve_power_flow_with`] using default sweep options.
pub fn solve_power_flow(
    net: &FeederNetwork,
    injections: &[f64],
    slack_voltage: f64,
) -> Result<PowerFlowSolution, PowerFlowError> {
    solve_power_flow_with(net, injections, slack_voltage, SweepOptions::default())
}

/// Solve the feeder for per-bus active power consumption `injections` (W,
/// negative for generation) with the slack bus held at `slack_voltage`.
/// A value on the slack bus itself is served directly by the grid.
pub fn solve_power_flow_with(
    net: &FeederNetwork,
    injections: &[f64],
    slack_voltage: f64,
    options: SweepOptions,
) -> Result<PowerFlowSolution, PowerFlowError> {
    let n = net.buses.len();
    if injections.len() != n {
        return Err(PowerFlowError::InjectionCount {
            expected: n,
            got: injections.len(),
        });
    }
    let v_slack = Complex64::new(slack_voltage, 0.0);
    let tol = options.tolerance_pu * net.nominal_voltage;
    let mut voltages = vec![v_slack; n];
    // branch current into each bus from upstream, root-to-leaf orientation
    let mut branch = vec![Complex64::new(0.0, 0.0); n];
    let mut mismatch = f64::INFINITY;
    let mut iterations = 0;
    let mut polished = false;

    while iterations < options.max_iterations {
        iterations += 1;
        // backward: leaves to root
        for b in branch.iter_mut() {
            *b = Complex64::new(0.0, 0.0);
        }
        for &b in net.order.iter().rev() {
            if b == net.slack {
                continue;
            }
            branch[b] += load_current(injections[b], voltages[b]);
            let up = net.parent[b];
            if up != net.slack {
                let carried = branch[b];
                branch[up] += carried;
            }
        }
        // forward: root to leaves
        mismatch = 0.0;
        for &b in net.order.iter().skip(1) {
            let line = net.feeding_line[b].expect("non-slack bus has a feeding line");
            let updated = voltages[net.parent[b]] - net.lines[line].impedance * branch[b];
            mismatch = f64::max(mismatch, (updated - voltages[b]).norm());
            voltages[b] = updated;
        }
        if let Some(b) = (0..n).find(|&b| !(voltages[b].norm() > 1e-3 * net.nominal_voltage)) {
            return Err(PowerFlowError::Collapse {
                bus: net.buses[b].id.clone(),
            });
        }
        if mismatch <= tol {
            // one more sweep so the reported currents match the converged
            // voltages to well below the tolerance
            if polished {
                break;
            }
            polished = true;
        }
    }
    if mismatch > tol {
        return Err(PowerFlowError::NotConverged {
            iterations,
            mismatch_pu: mismatch / net.nominal_voltage,
        });
    }

    let line_currents: Vec<Complex64> = (0..net.lines.len())
        .map(|k| branch[net.downstream_bus(k)] * net.downstream_sign(k))
        .collect();
    let line_active_power = net
        .lines
        .iter()
        .zip(&line_currents)
        .map(|(l, i)| (voltages[l.from] * i.conj()).re)
        .collect();
    let leaving_slack: Complex64 = (0..net.lines.len())
        .filter(|&k| net.parent[net.downstream_bus(k)] == net.slack)
        .map(|k| branch[net.downstream_bus(k)])
        .sum();
    let grid_power = (v_slack * leaving_slack.conj()).re + injections[net.slack];

    Ok(PowerFlowSolution {
        bus_voltages: voltages,
        line_currents,
        line_active_power,
        grid_power,
        iterations,
    })
}

/// Net active power drawn from the grid at the slack bus, W.
pub fn grid_draw(solution: &PowerFlowSolution) -> f64 {
    solution.grid_power
}

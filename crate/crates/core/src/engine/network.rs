//! Electrical composition of the community. Blocks joined by community lines
//! form a tree; each tree is solved as one radial feeder whose slack bus is
//! the terminal of its grid-connected root block.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::energy::feeder::{Bus, FeederError, FeederNetwork, Line, LoadKind, PowerFlowSolution};
use crate::scenario::ScenarioConfig;

use super::trace::{BusInfo, LineInfo};

/// Where a block's feeder sits inside its tree.
#[derive(Debug, Clone)]
pub(crate) struct BlockSite {
    pub tree: usize,
    pub bus_offset: usize,
    pub bus_count: usize,
    pub line_offset: usize,
    pub line_count: usize,
    pub terminal: usize,
    pub nominal_voltage: f64,
    /// Combined bus indices carrying each load kind.
    pub kind_buses: BTreeMap<LoadKind, Vec<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) struct Tree {
    pub net: FeederNetwork,
}

#[derive(Debug, Clone)]
pub(crate) struct CommunityGrid {
    pub trees: Vec<Tree>,
    pub sites: Vec<BlockSite>,
    /// `(tree, combined line index)` of every community line.
    pub community_lines: Vec<(usize, usize)>,
}

/// Loads of one block for one step, W. Generation and storage are given as
/// produced / charged power and mapped to bus consumption here.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct BlockLoads {
    pub building: f64,
    pub ev: f64,
    pub general: f64,
    pub comm: f64,
    pub generation: f64,
    pub storage: f64,
}

impl CommunityGrid {
    pub fn build(config: &ScenarioConfig) -> Result<Self, (String, FeederError)> {
        let n = config.blocks.len();
        let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut fed = vec![false; n];
        for (li, l) in config.community_lines.iter().enumerate() {
            let (Some(from), Some(to)) = (config.block_index(&l.from), config.block_index(&l.to)) else {
                continue;
            };
            children[from].push((to, li));
            fed[to] = true;
        }

        let mut trees = Vec::new();
        let mut sites: Vec<Option<BlockSite>> = vec![None; n];
        let mut community_lines = vec![(0, 0); config.community_lines.len()];
        for root in (0..n).filter(|&b| !fed[b]) {
            let tree = trees.len();
            let mut buses = Vec::new();
            let mut lines = Vec::new();
            let mut pending_links = Vec::new();
            let mut queue = VecDeque::from([root]);
            while let Some(b) = queue.pop_front() {
                let spec = &config.blocks[b];
                let f = &spec.feeder;
                let bus_offset = buses.len();
                let line_offset = lines.len();
                let local: BTreeMap<&str, usize> = f
                    .buses
                    .iter()
                    .enumerate()
                    .map(|(i, bus)| (bus.id.as_str(), i))
                    .collect();
                let terminal = bus_offset
                    + *local
                        .get(f.slack.as_str())
                        .ok_or_else(|| (spec.name.clone(), FeederError::UnknownSlack(f.slack.clone())))?;
                let mut kind_buses: BTreeMap<LoadKind, Vec<usize>> = BTreeMap::new();
                for (i, bus) in f.buses.iter().enumerate() {
                    let idx = bus_offset + i;
                    let kind = if idx == terminal { LoadKind::None } else { bus.kind };
                    if kind != LoadKind::None {
                        kind_buses.entry(kind).or_default().push(idx);
                    }
                    buses.push(Bus {
                        id: format!("{}/{}", spec.name, bus.id),
                        kind,
                    });
                }
                for (i, l) in f.lines.iter().enumerate() {
                    let end = |id: &String| {
                        local.get(id.as_str()).map(|&j| bus_offset + j).ok_or_else(|| {
                            (
                                spec.name.clone(),
                                FeederError::UnknownBus {
                                    line: i,
                                    bus: id.clone(),
                                },
                            )
                        })
                    };
                    lines.push(Line {
                        from: end(&l.from)?,
                        to: end(&l.to)?,
                        impedance: Complex64::new(l.r_ohm, l.x_ohm),
                        limit_w: l.limit_w,
                    });
                }
                sites[b] = Some(BlockSite {
                    tree,
                    bus_offset,
                    bus_count: f.buses.len(),
                    line_offset,
                    line_count: f.lines.len(),
                    terminal,
                    nominal_voltage: f.nominal_voltage_v,
                    kind_buses,
                });
                for &(child, li) in &children[b] {
                    pending_links.push((b, child, li));
                    queue.push_back(child);
                }
            }
            for (from, to, li) in pending_links {
                let l = &config.community_lines[li];
                community_lines[li] = (tree, lines.len());
                lines.push(Line {
                    from: sites[from].as_ref().map(|s| s.terminal).unwrap_or(0),
                    to: sites[to].as_ref().map(|s| s.terminal).unwrap_or(0),
                    impedance: Complex64::new(l.r_ohm, l.x_ohm),
                    limit_w: l.limit_w,
                });
            }
            let root_site = sites[root].as_ref().expect("root was visited");
            let net = FeederNetwork::new(buses, lines, root_site.terminal, root_site.nominal_voltage)
                .map_err(|e| (config.blocks[root].name.clone(), e))?;
            trees.push(Tree { net });
        }
        let sites = sites
            .into_iter()
            .enumerate()
            .map(|(b, s)| {
                s.ok_or_else(|| {
                    (
                        config.blocks[b].name.clone(),
                        FeederError::Unreachable(String::from("block is not connected to the grid")),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            trees,
            sites,
            community_lines,
        })
    }

    /// Per-bus consumption vectors, one per tree.
    pub fn injections(&self, loads: &[BlockLoads]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = self.trees.iter().map(|t| vec![0.0; t.net.buses().len()]).collect();
        for (site, l) in self.sites.iter().zip(loads) {
            let inj = &mut out[site.tree];
            for (kind, value) in [
                (LoadKind::Building, l.building),
                (LoadKind::Ev, l.ev),
                (LoadKind::General, l.general),
                (LoadKind::Comm, l.comm),
                (LoadKind::Generation, -l.generation),
                (LoadKind::Storage, l.storage),
            ] {
                // validation guarantees a bus for every kind in use
                if let Some(buses) = site.kind_buses.get(&kind) {
                    let share = value / buses.len() as f64;
                    for &b in buses {
                        inj[b] += share;
                    }
                }
            }
        }
        out
    }

    /// Active power flowing from a block's terminal into its own feeder, W.
    pub fn block_draw(&self, block: usize, solution: &PowerFlowSolution) -> f64 {
        let site = &self.sites[block];
        let net = &self.trees[site.tree].net;
        let v = solution.bus_voltages[site.terminal];
        let mut leaving = Complex64::new(0.0, 0.0);
        for k in site.line_offset..site.line_offset + site.line_count {
            let l = &net.lines()[k];
            if l.from == site.terminal {
                leaving += solution.line_currents[k];
            } else if l.to == site.terminal {
                leaving -= solution.line_currents[k];
            }
        }
        (v * leaving.conj()).re
    }

    pub fn bus_info(&self, config: &ScenarioConfig) -> Vec<BusInfo> {
        let mut out = Vec::new();
        for (b, site) in self.sites.iter().enumerate() {
            for (i, bus) in config.blocks[b].feeder.buses.iter().enumerate() {
                out.push(BusInfo {
                    block: b,
                    id: bus.id.clone(),
                    terminal: site.bus_offset + i == site.terminal,
                });
            }
        }
        out
    }

    pub fn line_info(&self, config: &ScenarioConfig) -> Vec<LineInfo> {
        let mut out = Vec::new();
        for (b, block) in config.blocks.iter().enumerate() {
            for l in &block.feeder.lines {
                out.push(LineInfo {
                    name: format!("{}/{}-{}", block.name, l.from, l.to),
                    block: Some(b),
                    limit_w: l.limit_w,
                });
            }
        }
        for l in &config.community_lines {
            out.push(LineInfo {
                name: l.name.clone(),
                block: None,
                limit_w: l.limit_w,
            });
        }
        out
    }

    /// Bus voltages (pu) and line powers (W) in [`bus_info`](Self::bus_info)
    /// and [`line_info`](Self::line_info) order.
    pub fn flatten(&self, solutions: &[PowerFlowSolution]) -> (Vec<f64>, Vec<f64>) {
        let mut voltages = Vec::new();
        let mut powers = Vec::new();
        for site in &self.sites {
            let s = &solutions[site.tree];
            for i in site.bus_offset..site.bus_offset + site.bus_count {
                voltages.push(s.bus_voltages[i].norm() / site.nominal_voltage);
            }
        }
        for site in &self.sites {
            let s = &solutions[site.tree];
            powers.extend_from_slice(&s.line_active_power[site.line_offset..site.line_offset + site.line_count]);
        }
        for &(tree, k) in &self.community_lines {
            powers.push(solutions[tree].line_active_power[k]);
        }
        (voltages, powers)
    }
}

//! Time-indexed record of every published quantity.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::CouplingMode;

/// Per-block values published at one step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlockRecord {
    /// Power drawn through the block terminal, W.
    pub grid_power: f64,
    pub soc: f64,
    /// Battery exchange over the step, W; positive while charging.
    pub battery_power: f64,
    pub p_pv: f64,
    pub p_win: f64,
    pub p_ev: f64,
    pub p_com: f64,
    pub p_bui: f64,
    pub p_gen: f64,
    pub n_parked: f64,
    pub n_char: f64,
    /// Tower throughput, packets/s.
    pub throughput: f64,
}

impl BlockRecord {
    pub fn renewable(&self) -> f64 {
        self.p_pv + self.p_win
    }

    pub fn demand(&self) -> f64 {
        self.p_bui + self.p_ev + self.p_com + self.p_gen
    }
}

/// Per-road values published at one step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoadRecord {
    /// vehicles/h
    pub q_in: f64,
    /// vehicles/h, averaged over the step
    pub q_out: f64,
    /// m/s
    pub velocity: f64,
    /// vehicles/h
    pub flow: f64,
    /// s
    pub travel_time: f64,
    pub vehicles: f64,
    /// packets/s
    pub throughput: f64,
    pub packet_loss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub time: f64,
    pub blocks: Vec<BlockRecord>,
    pub roads: Vec<RoadRecord>,
    /// Voltage magnitude per bus, per unit of the block's nominal voltage.
    pub bus_voltage: Vec<f64>,
    /// Active power entering each line at its `from` end, W.
    pub line_power: Vec<f64>,
    /// Sum of the power drawn at every grid connection, W.
    pub community_grid_power: f64,
    /// Active power dissipated in all lines, W.
    pub line_losses: f64,
    pub coupling_iterations: usize,
    pub coupling_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BusInfo {
    pub block: usize,
    pub id: String,
    /// Bus where the block connects upstream.
    pub terminal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineInfo {
    pub name: String,
    /// Owning block; `None` for lines between blocks.
    pub block: Option<usize>,
    pub limit_w: f64,
}

/// One quantity as a time x element table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantityTable {
    pub quantity: String,
    pub unit: String,
    pub columns: Vec<String>,
    pub times: Vec<f64>,
    /// `values[step][column]`
    pub values: Vec<Vec<f64>>,
}

impl QuantityTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.values.iter().map(|row| row[j]).collect())
    }
}

/// Published quantities: `(name, unit)`.
pub const QUANTITIES: &[(&str, &str)] = &[
    ("grid_power", "W"),
    ("soc", "1"),
    ("battery_power", "W"),
    ("p_pv", "W"),
    ("p_win", "W"),
    ("p_ev", "W"),
    ("p_com", "W"),
    ("p_bui", "W"),
    ("p_gen", "W"),
    ("n_parked", "vehicles"),
    ("n_char", "vehicles"),
    ("throughput", "packets/s"),
    ("bus_voltage", "pu"),
    ("line_power", "W"),
    ("losses", "W"),
    ("q_in", "vehicles/h"),
    ("q_out", "vehicles/h"),
    ("velocity", "m/s"),
    ("flow", "vehicles/h"),
    ("travel_time", "s"),
    ("vehicles", "vehicles"),
    ("link_throughput", "packets/s"),
    ("packet_loss", "1"),
    ("coupling", "1"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSet {
    pub mode: CouplingMode,
    pub dt: f64,
    pub blocks: Vec<String>,
    /// Empty when transport is not simulated.
    pub roads: Vec<String>,
    pub buses: Vec<BusInfo>,
    pub lines: Vec<LineInfo>,
    pub records: Vec<StepRecord>,
}

impl TraceSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.time).collect()
    }

    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b == name)
    }

    pub fn road_index(&self, name: &str) -> Option<usize> {
        self.roads.iter().position(|r| r == name)
    }

    /// Series of one block field.
    pub fn block_series(&self, block: usize, f: impl Fn(&BlockRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(|r| f(&r.blocks[block])).collect()
    }

    /// Series of one road field.
    pub fn road_series(&self, road: usize, f: impl Fn(&RoadRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(|r| f(&r.roads[road])).collect()
    }

    /// Build the table of a published quantity, or `None` for an unknown name.
    pub fn table(&self, quantity: &str) -> Option<QuantityTable> {
        let unit = QUANTITIES.iter().find(|(q, _)| *q == quantity)?.1;
        let block_field: Option<fn(&BlockRecord) -> f64> = match quantity {
            "grid_power" => Some(|b| b.grid_power),
            "soc" => Some(|b| b.soc),
            "battery_power" => Some(|b| b.battery_power),
            "p_pv" => Some(|b| b.p_pv),
            "p_win" => Some(|b| b.p_win),
            "p_ev" => Some(|b| b.p_ev),
            "p_com" => Some(|b| b.p_com),
            "p_bui" => Some(|b| b.p_bui),
            "p_gen" => Some(|b| b.p_gen),
            "n_parked" => Some(|b| b.n_parked),
            "n_char" => Some(|b| b.n_char),
            "throughput" => Some(|b| b.throughput),
            _ => None,
        };
        let road_field: Option<fn(&RoadRecord) -> f64> = match quantity {
            "q_in" => Some(|r| r.q_in),
            "q_out" => Some(|r| r.q_out),
            "velocity" => Some(|r| r.velocity),
            "flow" => Some(|r| r.flow),
            "travel_time" => Some(|r| r.travel_time),
            "vehicles" => Some(|r| r.vehicles),
            "link_throughput" => Some(|r| r.throughput),
            "packet_loss" => Some(|r| r.packet_loss),
            _ => None,
        };
        let (columns, values): (Vec<String>, Vec<Vec<f64>>) = if let Some(f) = block_field {
            let mut columns = self.blocks.clone();
            let community = quantity == "grid_power";
            if community {
                columns.push(String::from("community"));
            }
            let values = self
                .records
                .iter()
                .map(|r| {
                    let mut row: Vec<f64> = r.blocks.iter().map(f).collect();
                    if community {
                        row.push(r.community_grid_power);
                    }
                    row
                })
                .collect();
            (columns, values)
        } else if let Some(f) = road_field {
            let values = self.records.iter().map(|r| r.roads.iter().map(f).collect()).collect();
            (self.roads.clone(), values)
        } else {
            match quantity {
                "bus_voltage" => (
                    self.buses
                        .iter()
                        .map(|b| format!("{}/{}", self.blocks[b.block], b.id))
                        .collect(),
                    self.records.iter().map(|r| r.bus_voltage.clone()).collect(),
                ),
                "line_power" => (
                    self.lines.iter().map(|l| l.name.clone()).collect(),
                    self.records.iter().map(|r| r.line_power.clone()).collect(),
                ),
                "losses" => (
                    alloc::vec![String::from("community")],
                    self.records.iter().map(|r| alloc::vec![r.line_losses]).collect(),
                ),
                _ => (
                    alloc::vec![String::from("iterations"), String::from("residual")],
                    self.records
                        .iter()
                        .map(|r| alloc::vec![r.coupling_iterations as f64, r.coupling_residual])
                        .collect(),
                ),
            }
        };
        Some(QuantityTable {
            quantity: String::from(quantity),
            unit: String::from(unit),
            columns,
            times: self.times(),
            values,
        })
    }
}

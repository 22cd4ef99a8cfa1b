//! Trace, indicator and manifest files of a run, and reading traces back.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use gridmesh_core::engine::{QuantityTable, QUANTITIES};
use gridmesh_core::indicators::IndicatorReport;
use gridmesh_core::TraceSet;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Self { csv: true, json: false }
    }
}

impl std::str::FromStr for Formats {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut f = Formats {
            csv: false,
            json: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "csv" => f.csv = true,
                "json" => f.json = true,
                other => bail!("unknown output format \"{other}\" (expected csv or json)"),
            }
        }
        if !f.csv && !f.json {
            bail!("no output format selected");
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub scenario_sha256: String,
    pub mode: String,
    pub dt_s: f64,
    pub steps: usize,
    pub formats: Vec<String>,
    pub created_unix_s: u64,
}

/// Tables worth writing: every published quantity that has elements.
pub fn tables(trace: &TraceSet) -> Vec<QuantityTable> {
    QUANTITIES
        .iter()
        .filter_map(|(q, _)| trace.table(q))
        .filter(|t| !t.columns.is_empty())
        .collect()
}

/// `time_s` followed by one column per element. Numbers use the shortest
/// representation that parses back to the same `f64`.
pub fn table_csv(table: &QuantityTable) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["time_s".to_string()];
    header.extend(table.columns.iter().cloned());
    w.write_record(&header)?;
    for (t, row) in table.times.iter().zip(&table.values) {
        let mut rec = vec![t.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

pub fn trace_file_name(quantity: &str) -> String {
    format!("trace_{quantity}.csv")
}

/// Every file of a run, name and contents, built in memory.
pub fn run_files(
    trace: &TraceSet,
    report: &IndicatorReport,
    manifest: &Manifest,
    formats: Formats,
) -> Result<Vec<(String, Vec<u8>)>> {
    let tables = tables(trace);
    let mut files = Vec::new();
    if formats.csv {
        for t in &tables {
            files.push((trace_file_name(&t.quantity), table_csv(t)?));
        }
    }
    if formats.json {
        #[derive(Serialize)]
        struct TraceJson<'a> {
            mode: String,
            dt_s: f64,
            quantities: &'a [QuantityTable],
        }
        let doc = TraceJson {
            mode: trace.mode.to_string(),
            dt_s: trace.dt,
            quantities: &tables,
        };
        files.push(("trace.json".into(), json_bytes(&doc)?));
    }
    files.push(("indicators.json".into(), json_bytes(report)?));
    files.push(("manifest.json".into(), json_bytes(manifest)?));
    Ok(files)
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Write each file to a temporary name inside `dir` and rename it into
/// place, so a reader never sees a half-written file.
pub fn write_atomically(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let mut tmp = tempfile::Builder::new()
            .prefix(".gridmesh-")
            .tempfile_in(dir)
            .with_context(|| format!("cannot write in {}", dir.display()))?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        staged.push((tmp, dir.join(name)));
    }
    for (tmp, target) in staged {
        tmp.persist(&target)
            .with_context(|| format!("cannot write {}", target.display()))?;
    }
    Ok(())
}

/// Read one quantity back from a run directory: `trace_<quantity>.csv` if
/// present, otherwise the quantity inside `trace.json`.
pub fn read_table(dir: &Path, quantity: &str) -> Result<QuantityTable> {
    let csv_path = dir.join(trace_file_name(quantity));
    if csv_path.exists() {
        return read_table_csv(&csv_path, quantity);
    }
    let json_path = dir.join("trace.json");
    if json_path.exists() {
        #[derive(serde::Deserialize)]
        struct TraceJson {
            quantities: Vec<QuantityTable>,
        }
        let doc: TraceJson = serde_json::from_slice(&fs::read(&json_path)?)
            .with_context(|| format!("cannot parse {}", json_path.display()))?;
        if let Some(t) = doc.quantities.into_iter().find(|t| t.quantity == quantity) {
            return Ok(t);
        }
    }
    if !dir.is_dir() {
        bail!("{} is not a directory", dir.display());
    }
    bail!(
        "quantity \"{quantity}\" not found in {} (known quantities: {})",
        dir.display(),
        QUANTITIES.iter().map(|q| q.0).collect::<Vec<_>>().join(", ")
    )
}

pub fn read_table_csv(path: &PathBuf, quantity: &str) -> Result<QuantityTable> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let headers = reader.headers()?.clone();
    if headers.get(0) != Some("time_s") {
        bail!("{}: first column must be time_s", path.display());
    }
    let columns: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let nums = row
            .iter()
            .map(|c| c.parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .with_context(|| format!("{}: row {} is not numeric", path.display(), i + 2))?;
        times.push(nums[0]);
        values.push(nums[1..].to_vec());
    }
    let unit = QUANTITIES
        .iter()
        .find(|q| q.0 == quantity)
        .map(|q| q.1.to_string())
        .unwrap_or_default();
    Ok(QuantityTable {
        quantity: quantity.to_string(),
        unit,
        columns,
        times,
        values,
    })
}

//! Command-line interface.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use gridmesh_core::engine::{self, compare, DeviationReport};
use gridmesh_core::indicators::{self, IndicatorReport};
use gridmesh_core::CouplingMode;
use sha2::{Digest, Sha256};

use crate::output::{self, Formats, Manifest};
use crate::scenario_file::load_scenario_with;

#[derive(Debug, Parser)]
#[command(
    name = "gridmesh",
    version,
    about = "Co-simulate the energy, transportation and communication systems of a community"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and write traces, indicators and a manifest.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Coupling mode: e, et or etc.
        #[arg(long)]
        mode: CouplingMode,
        /// Override the scenario step size, s.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated output formats: csv, json.
        #[arg(long, default_value = "csv")]
        format: Formats,
    },
    /// Per-step relative deviation of one quantity between two runs.
    Compare {
        dir_a: PathBuf,
        dir_b: PathBuf,
        #[arg(long)]
        quantity: String,
        /// Deviation CSV path [default: deviation_<quantity>.csv].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Long-format (time, element, value) CSV of one quantity.
    Plotdata {
        dir: PathBuf,
        #[arg(long)]
        quantity: String,
        /// Comma-separated element names [default: all].
        #[arg(long, value_delimiter = ',')]
        elements: Vec<String>,
        /// Output path [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            mode,
            dt,
            out,
            format,
        } => cmd_run(&scenario, mode, dt, &out, format, stdout).map(|_| ()),
        Command::Compare {
            dir_a,
            dir_b,
            quantity,
            out,
        } => {
            let out = out.unwrap_or_else(|| PathBuf::from(format!("deviation_{quantity}.csv")));
            cmd_compare(&dir_a, &dir_b, &quantity, &out, stdout).map(|_| ())
        }
        Command::Plotdata {
            dir,
            quantity,
            elements,
            out,
        } => {
            let bytes = cmd_plotdata(&dir, &quantity, &elements)?;
            match out {
                Some(path) => output::write_atomically(
                    path.parent()
                        .filter(|p| !p.as_os_str().is_empty())
                        .unwrap_or(Path::new(".")),
                    &[(file_name(&path)?, bytes)],
                ),
                None => stdout.write_all(&bytes).map_err(Into::into),
            }
        }
    }
}

fn file_name(path: &Path) -> Result<String> {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .with_context(|| format!("{} is not a file path", path.display()))
}

pub fn cmd_run(
    scenario: &Path,
    mode: CouplingMode,
    dt: Option<f64>,
    out: &Path,
    formats: Formats,
    stdout: &mut dyn Write,
) -> Result<IndicatorReport> {
    let bytes = fs::read(scenario).with_context(|| format!("cannot read {}", scenario.display()))?;
    let config = load_scenario_with(scenario, dt)?;
    log::info!("running {} in mode {mode}", scenario.display());
    let trace = engine::run(&config, mode)?;
    let report = indicators::report(&trace);
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        scenario: scenario.display().to_string(),
        scenario_sha256: hex::encode(Sha256::digest(&bytes)),
        mode: mode.to_string(),
        dt_s: config.dt,
        steps: trace.len(),
        formats: [("csv", formats.csv), ("json", formats.json)]
            .iter()
            .filter(|f| f.1)
            .map(|f| f.0.to_string())
            .collect(),
        created_unix_s: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    let files = output::run_files(&trace, &report, &manifest, formats)?;
    output::write_atomically(out, &files)?;
    write_report(stdout, &report)?;
    Ok(report)
}

fn fmt_opt(v: Option<f64>, precision: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.precision$}"))
}

pub fn write_report(w: &mut dyn Write, report: &IndicatorReport) -> Result<()> {
    writeln!(
        w,
        "{:<14} {:>10} {:>10} {:>12} {:>12}",
        "block", "PVLR %", "LCF %", "SI_B", "SI_L"
    )?;
    for b in report.blocks.iter().chain(std::iter::once(&report.community)) {
        writeln!(
            w,
            "{:<14} {:>10} {:>10} {:>12} {:>12}",
            b.name,
            fmt_opt(b.pvlr, 2),
            fmt_opt(b.lcf, 2),
            fmt_opt(b.si_b, 6),
            fmt_opt(b.si_l, 6)
        )?;
    }
    if !report.roads.is_empty() {
        writeln!(w)?;
        writeln!(
            w,
            "{:<10} {:>12} {:>12} {:>10} {:>10} {:>10}",
            "road", "mean t s", "peak t s", "at s", "mean γ", "peak γ"
        )?;
        for r in &report.roads {
            writeln!(
                w,
                "{:<10} {:>12.1} {:>12.1} {:>10} {:>10.4} {:>10.4}",
                r.road,
                r.mean_travel_time_s,
                r.peak_travel_time_s,
                r.peak_travel_time_at_s,
                r.mean_packet_loss,
                r.peak_packet_loss
            )?;
        }
    }
    Ok(())
}

pub fn deviation_csv(report: &DeviationReport) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["time_s".to_string()];
    header.extend(report.columns.iter().map(|c| format!("{c}_pct")));
    w.write_record(&header)?;
    for (t, row) in report.times.iter().zip(&report.deviations) {
        let mut rec = vec![t.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn cmd_compare(
    dir_a: &Path,
    dir_b: &Path,
    quantity: &str,
    out: &Path,
    stdout: &mut dyn Write,
) -> Result<DeviationReport> {
    let a = output::read_table(dir_a, quantity)?;
    let b = output::read_table(dir_b, quantity)?;
    let report = compare(&a, &b)?;
    let dir = out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    output::write_atomically(dir, &[(file_name(out)?, deviation_csv(&report)?)])?;
    writeln!(stdout, "quantity: {quantity}")?;
    writeln!(
        stdout,
        "peak deviation: {:.6}% at t={} s ({})",
        report.peak,
        report.peak_time.map_or("n/a".to_string(), |t| t.to_string()),
        report.peak_column.as_deref().unwrap_or("n/a")
    )?;
    writeln!(stdout, "mean deviation: {:.6}%", report.mean)?;
    Ok(report)
}

pub fn cmd_plotdata(dir: &Path, quantity: &str, elements: &[String]) -> Result<Vec<u8>> {
    let table = output::read_table(dir, quantity)?;
    let selected: Vec<usize> = if elements.is_empty() {
        (0..table.columns.len()).collect()
    } else {
        elements
            .iter()
            .map(|e| {
                table.columns.iter().position(|c| c == e).with_context(|| {
                    format!(
                        "unknown element \"{e}\" for {quantity} (available: {})",
                        table.columns.join(", ")
                    )
                })
            })
            .collect::<Result<_>>()?
    };
    if selected.is_empty() {
        bail!("{quantity} has no elements");
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["time_s", "element", "value"])?;
    for (t, row) in table.times.iter().zip(&table.values) {
        for &j in &selected {
            w.write_record([t.to_string(), table.columns[j].clone(), row[j].to_string()])?;
        }
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))
}

//! Scenario documents (`.scn`, TOML) and their sidecar files.
//!
//! Series fields accept three forms:
//!
//! ```toml
//! building_load = { path = "series/building_res.csv", interpolation = "linear" }
//! building_load = { samples = [[0.0, 1.0e5], [3600.0, 1.2e5]], interpolation = "step-hold" }
//! building_load = { value = 1.0e5 }
//! ```
//!
//! A CSV series has a `time_s,value` header. Any other table with a `path`
//! key is replaced by the TOML file it points to (used for feeders). Paths
//! are relative to the scenario file.

use std::fs;
use std::path::{Path, PathBuf};

use gridmesh_core::scenario::ValidationError;
use gridmesh_core::ScenarioConfig;
use serde::Deserialize;
use toml::Value;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: parse error: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{field}: referenced file {path} does not exist")]
    MissingSeries { field: String, path: PathBuf },
    #[error("{field}: {path}: {message}")]
    SeriesFile {
        field: String,
        path: PathBuf,
        message: String,
    },
    #[error("{0}")]
    Validation(ValidationError),
    #[error("{field}: {message}")]
    Resample { field: String, message: String },
}

/// Read, resolve, validate and resample a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, LoadError> {
    load_scenario_with(path, None)
}

/// [`load_scenario`] with an optional step-size override applied before
/// validation and resampling.
pub fn load_scenario_with(path: &Path, dt: Option<f64>) -> Result<ScenarioConfig, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut config = parse_scenario(&text, base, path)?;
    if let Some(dt) = dt {
        config.dt = dt;
    }
    finish(config)
}

/// Parse a scenario document whose relative paths resolve against `base`.
/// `origin` is only used in messages. The result is not validated.
pub fn parse_scenario(text: &str, base: &Path, origin: &Path) -> Result<ScenarioConfig, LoadError> {
    let mut doc: Value = toml::from_str(text).map_err(|e| LoadError::Parse {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })?;
    resolve(&mut doc, base, "")?;
    ScenarioConfig::deserialize(doc).map_err(|e| LoadError::Parse {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })
}

/// Validate and resample a parsed configuration.
pub fn finish(mut config: ScenarioConfig) -> Result<ScenarioConfig, LoadError> {
    config.validate().map_err(LoadError::Validation)?;
    config.resample_series().map_err(|(field, e)| LoadError::Resample {
        field,
        message: e.to_string(),
    })?;
    Ok(config)
}

/// A self-contained scenario document with every series inlined.
pub fn to_toml(config: &ScenarioConfig) -> Result<String, toml::ser::Error> {
    toml::to_string(config)
}

fn child(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

/// Replace file references and constants in place.
fn resolve(value: &mut Value, base: &Path, field: &str) -> Result<(), LoadError> {
    match value {
        Value::Table(table) => {
            if let Some(Value::String(rel)) = table.get("path") {
                let path = base.join(rel);
                let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
                if !path.exists() {
                    return Err(LoadError::MissingSeries {
                        field: field.to_string(),
                        path,
                    });
                }
                if is_csv {
                    let interpolation = table.get("interpolation").cloned();
                    if let Some(extra) = table.keys().find(|k| *k != "path" && *k != "interpolation") {
                        return Err(LoadError::Parse {
                            path: path.clone(),
                            message: format!("{field}: unexpected key \"{extra}\" next to a series path"),
                        });
                    }
                    let samples = read_series_csv(&path).map_err(|message| LoadError::SeriesFile {
                        field: field.to_string(),
                        path: path.clone(),
                        message,
                    })?;
                    let mut t = toml::Table::new();
                    t.insert(
                        "samples".into(),
                        Value::Array(
                            samples
                                .into_iter()
                                .map(|(a, b)| Value::Array(vec![Value::Float(a), Value::Float(b)]))
                                .collect(),
                        ),
                    );
                    if let Some(i) = interpolation {
                        t.insert("interpolation".into(), i);
                    }
                    *value = Value::Table(t);
                } else {
                    if table.len() != 1 {
                        return Err(LoadError::Parse {
                            path: path.clone(),
                            message: format!("{field}: an included file reference takes only \"path\""),
                        });
                    }
                    let text = fs::read_to_string(&path).map_err(|source| LoadError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    let mut included: Value = toml::from_str(&text).map_err(|e| LoadError::Parse {
                        path: path.clone(),
                        message: e.to_string(),
                    })?;
                    let inner_base = path.parent().unwrap_or(base).to_path_buf();
                    resolve(&mut included, &inner_base, field)?;
                    *value = included;
                }
                return Ok(());
            }
            if table.len() == 1 {
                if let Some(v) = table.get("value") {
                    let v = v.clone();
                    let mut t = toml::Table::new();
                    t.insert(
                        "samples".into(),
                        Value::Array(vec![Value::Array(vec![Value::Float(0.0), v])]),
                    );
                    t.insert("interpolation".into(), Value::String("step-hold".into()));
                    *value = Value::Table(t);
                    return Ok(());
                }
            }
            for (k, v) in table.iter_mut() {
                resolve(v, base, &child(field, k))?;
            }
            Ok(())
        }
        Value::Array(items) => {
            for (i, item) in items.iter_mut().enumerate() {
                let label = item
                    .get("name")
                    .and_then(|n| n.as_str())
                    .map(str::to_string)
                    .unwrap_or_else(|| i.to_string());
                resolve(item, base, &format!("{field}[{label}]"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Read a `time_s,value` CSV into samples.
pub fn read_series_csv(path: &Path) -> Result<Vec<(f64, f64)>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| e.to_string())?;
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    if headers.len() != 2 || &headers[0] != "time_s" || &headers[1] != "value" {
        return Err(format!(
            "expected header \"time_s,value\", found \"{}\"",
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut samples = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let parse = |j: usize| -> Result<f64, String> {
            row[j]
                .parse::<f64>()
                .map_err(|_| format!("row {}: \"{}\" is not a number", i + 2, &row[j]))
        };
        samples.push((parse(0)?, parse(1)?));
    }
    Ok(samples)
}

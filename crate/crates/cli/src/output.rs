//! Result tables, numerical checks and the run manifest.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// One CSV file: a header and rows of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(file: &str, header: &[&'static str]) -> Self {
        Self {
            file: file.to_string(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Position of the first non-finite value, as `(row, column name)`.
    pub fn first_non_finite(&self) -> Option<(usize, &'static str)> {
        self.rows.iter().enumerate().find_map(|(i, r)| {
            r.iter()
                .position(|v| !v.is_finite())
                .map(|j| (i, self.header[j]))
        })
    }

    /// CSV text with every value written as `{:.16e}`.
    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| format!("{v:.16e}")))
                .map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// A residual compared against a pinned tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `residual <= tolerance`.
    pub fn at_most(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }

    /// Passes when `residual < tolerance`.
    pub fn below(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual < tolerance,
        }
    }

    /// Passes when `value > bound`; the residual is `bound - value`.
    pub fn above(name: &str, value: f64, bound: f64) -> Self {
        Self::below(name, bound - value, 0.0)
    }
}

/// Tables and checks produced by one experiment.
#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl ExperimentOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub experiment: String,
    pub tool_version: String,
    pub seed: u64,
    pub parameters: std::collections::BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub outputs: Vec<String>,
    pub passed: bool,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Writes the tables and then the manifest into `dir`.
///
/// A table holding a non-finite value is not written; a failed check naming
/// it is added to the manifest instead.
pub fn write_run(dir: &Path, manifest: &mut RunManifest, tables: &[Table]) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    for t in tables {
        if let Some((row, col)) = t.first_non_finite() {
            manifest.checks.push(Check {
                name: format!("finite:{}:{col}:row{row}", t.file),
                residual: f64::INFINITY,
                tolerance: 0.0,
                passed: false,
            });
            continue;
        }
        fs::write(dir.join(&t.file), t.to_csv()?)?;
        manifest.outputs.push(t.file.clone());
    }
    manifest.passed = manifest.checks.iter().all(|c| c.passed);
    let json = serde_json::to_string_pretty(manifest).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(dir.join(MANIFEST_FILE), json + "\n")?;
    Ok(())
}

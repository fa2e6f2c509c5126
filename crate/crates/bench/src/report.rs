//! Tabular experiment output: a CSV with `#` metadata lines and a sidecar JSON.
//!
//! The CSV is deterministic for a fixed config and step count: it carries no wall-clock
//! data, and numbers are written with 12 significant digits.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{BenchError, Result};

/// Upper slack on fidelities for integration roundoff.
pub const FIDELITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Number(x) => Some(*x),
            Self::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Self::Number(x) => format_number(*x),
            Self::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Number(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

/// 12 significant digits, scientific notation.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

/// Result of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub experiment: String,
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Sweep axes, column name to grid values.
    pub axes: BTreeMap<String, Vec<f64>>,
    pub summary: BTreeMap<String, Value>,
    pub steps: usize,
    pub runtime_seconds: f64,
    pub notes: Vec<String>,
}

impl SweepReport {
    pub fn new(experiment: &str, command: &str, columns: &[&str], steps: usize) -> Self {
        Self {
            experiment: experiment.to_string(),
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            axes: BTreeMap::new(),
            summary: BTreeMap::new(),
            steps,
            runtime_seconds: 0.0,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.summary.insert(key.into(), value.into());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn summary_f64(&self, key: &str) -> Option<f64> {
        self.summary.get(key).and_then(Value::as_f64)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column, skipping text cells.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self.column_index(name).ok_or_else(|| BenchError::Config(format!("no column '{name}'")))?;
        Ok(self.rows.iter().filter_map(|r| r[k].as_f64()).collect())
    }

    fn is_fidelity_column(name: &str) -> bool {
        name == "fidelity" || name.ends_with("_fidelity")
    }

    /// Rows match the header; numbers are finite; fidelities lie in `[0, 1]` up to
    /// [`FIDELITY_SLACK`].
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(BenchError::Config(format!(
                    "row {i} has {} cells for {} columns",
                    row.len(),
                    self.columns.len()
                )));
            }
            for (name, cell) in self.columns.iter().zip(row) {
                let Some(x) = cell.as_f64() else { continue };
                if !x.is_finite() {
                    return Err(BenchError::Config(format!("row {i}, column {name}: non-finite value {x}")));
                }
                if Self::is_fidelity_column(name) && !(-FIDELITY_SLACK..=1.0 + FIDELITY_SLACK).contains(&x) {
                    return Err(BenchError::Config(format!("row {i}, column {name}: fidelity {x} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    /// CSV text: `# key: value` metadata lines, a header, then the rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = Vec::new();
        writeln!(out, "# experiment: {}", self.experiment)?;
        writeln!(out, "# command: {}", self.command)?;
        writeln!(out, "# steps: {}", self.steps)?;
        for note in &self.notes {
            writeln!(out, "# note: {note}")?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::render))?;
            }
            w.flush()?;
        }
        String::from_utf8(out).map_err(|e| BenchError::Config(format!("non-utf8 csv: {e}")))
    }

    /// Metadata JSON: everything but the rows, plus the tool version.
    pub fn meta_json(&self) -> Result<String> {
        let meta = serde_json::json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "experiment": self.experiment,
            "command": self.command,
            "columns": self.columns,
            "row_count": self.rows.len(),
            "axes": self.axes,
            "summary": self.summary,
            "steps": self.steps,
            "runtime_seconds": self.runtime_seconds,
            "notes": self.notes,
        });
        Ok(serde_json::to_string_pretty(&meta)?)
    }

    /// Writes `<experiment>.csv` and `<experiment>.meta.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        self.validate()?;
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        let meta_path = dir.join(format!("{}.meta.json", self.experiment));
        std::fs::write(&csv_path, self.to_csv()?)?;
        std::fs::write(&meta_path, self.meta_json()?)?;
        Ok(vec![csv_path, meta_path])
    }
}

/// Parses a CSV written by [`SweepReport::to_csv`] back into header and rows.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r.records().map(|rec| rec.map(|x| x.iter().map(str::to_string).collect())).collect::<std::result::Result<_, _>>()?;
    Ok((header, rows))
}

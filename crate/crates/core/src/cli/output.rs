use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

/// One CSV file worth of data. The first column is the abscissa of the
/// optional plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub stem: String,
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
    /// Columns drawn against column 0 when plots are requested; empty means
    /// no plot.
    pub plot: Vec<usize>,
}

impl Table {
    pub fn new(stem: impl Into<String>, title: impl Into<String>, columns: Vec<Column>) -> Self {
        Self {
            stem: stem.into(),
            title: title.into(),
            columns,
            rows: Vec::new(),
            plot: Vec::new(),
        }
    }

    pub fn plotted(mut self, cols: &[usize]) -> Self {
        self.plot = cols.to_vec();
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:?}")
}

pub fn render_csv(experiment: &str, table: &Table) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# wqed {experiment}: {}", table.title);
    let units: Vec<String> = table
        .columns
        .iter()
        .map(|c| format!("{} [{}]", c.name, c.unit))
        .collect();
    let _ = writeln!(s, "# units: {}", units.join(", "));
    let names: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
    s.push_str(&names.join(","));
    s.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: &str, rows: Option<usize>) -> Result<OutputFile, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    Ok(OutputFile {
        path: name.to_string(),
        sha256: sha256_hex(contents.as_bytes()),
        bytes: contents.len(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Versions {
    pub wqed: &'static str,
    pub manifest_format: u32,
}

impl Default for Versions {
    fn default() -> Self {
        Self {
            wqed: env!("CARGO_PKG_VERSION"),
            manifest_format: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Aborted,
}

/// Record of one run, written next to the data files.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub status: Status,
    pub versions: Versions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_path: Option<PathBuf>,
    pub config_sha256: String,
    pub config: Value,
    pub seed: u64,
    pub threads: usize,
    pub knobs: Value,
    pub outputs: Vec<OutputFile>,
    pub diagnostics: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_s: f64,
}

impl Manifest {
    pub fn file_name(experiment: &str) -> String {
        format!("{experiment}.manifest.json")
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(Self::file_name(&self.experiment));
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Config(e.to_string()))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, -0.1, 1.0 / 3.0, 1e-300, 6.02e23, f64::MIN_POSITIVE, 2.5e-7] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1e-20), "1e-20");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", "demo table", vec![Column::new("x", "1"), Column::new("y", "m")]);
        t.push(vec![0.5, 2.0]);
        let s = render_csv("spectrum2le", &t);
        assert_eq!(
            s,
            "# wqed spectrum2le: demo table\n# units: x [1], y [m]\nx,y\n0.5,2.0\n"
        );
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}

//! CSV and manifest serialization.
//!
//! Floats use Rust's shortest round-trip exponent formatting, so identical
//! inputs give identical bytes.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gyrospin_core::protocol::{SweepTable, Trajectory};

use crate::error::CliError;

/// One cell of a CSV row.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

/// In-memory CSV document with `#` comment lines and a header row.
#[derive(Clone, Debug, Default)]
pub struct Csv {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Csv {
    pub fn new(header: Vec<String>) -> Self {
        Self { header, ..Default::default() }
    }

    pub fn comment(mut self, line: impl Into<String>) -> Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn from_table(table: &SweepTable) -> Self {
        let mut csv = Self::new(table.columns.iter().map(|c| c.label()).collect());
        for r in &table.rows {
            csv.push(r.iter().map(|&x| Cell::Num(x)).collect());
        }
        csv
    }

    pub fn from_trajectory(tr: &Trajectory) -> Self {
        Self::from_table(&tr.to_table())
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format_float(*x),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Written file as recorded in the manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Single writer for every artifact of a run.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<OutputFile>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(root).map_err(|e| CliError::Output(format!("{}: {e}", root.display())))?;
        Ok(Self { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn write_csv(&mut self, name: &str, csv: &Csv) -> Result<(), CliError> {
        let text = csv.render();
        let path = self.root.join(name);
        std::fs::write(&path, text.as_bytes()).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        self.files.push(OutputFile { file: name.into(), rows: csv.rows(), sha256: sha256_hex(text.as_bytes()) });
        Ok(())
    }

    /// Writes `manifest.json` listing every CSV written so far.
    pub fn finish<T: Serialize>(self, manifest: impl FnOnce(Vec<OutputFile>) -> T) -> Result<PathBuf, CliError> {
        let m = manifest(self.files);
        let mut text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        let path = self.root.join("manifest.json");
        std::fs::write(&path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

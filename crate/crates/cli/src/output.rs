//! CSV tables with JSON sidecar manifests.

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// 17 significant digits in scientific notation; -0 prints as 0.
pub fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<i8> for Cell {
    fn from(v: i8) -> Self {
        Cell::I(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::F(v) => f.write_str(&num(*v)),
            Cell::I(v) => write!(f, "{v}"),
            Cell::S(s) => f.write_str(s),
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    fn render(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }
}

/// Everything a sidecar records about where its numbers came from.
#[derive(Serialize)]
struct Manifest<'a> {
    schema: u32,
    command: &'a str,
    version: &'a str,
    file: String,
    columns: &'a [&'static str],
    rows: usize,
    seed: Option<u64>,
    config: &'a Value,
    summary: &'a Value,
}

pub struct Writer {
    pub dir: PathBuf,
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
    pub written: Vec<PathBuf>,
}

impl Writer {
    pub fn new<C: Serialize>(dir: &Path, command: &'static str, config: &C, seed: Option<u64>) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), command, config: serde_json::to_value(config)?, seed, written: vec![] })
    }

    /// Writes `name.csv` and `name.json`.
    pub fn table(&mut self, name: &str, table: &Table, summary: Value) -> Result<()> {
        let csv = self.dir.join(format!("{name}.csv"));
        std::fs::write(&csv, table.render()).with_context(|| format!("cannot write {}", csv.display()))?;
        let manifest = Manifest {
            schema: crate::config::SCHEMA,
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            file: format!("{name}.csv"),
            columns: &table.columns,
            rows: table.len(),
            seed: self.seed,
            config: &self.config,
            summary: &summary,
        };
        let json = self.dir.join(format!("{name}.json"));
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        std::fs::write(&json, text).with_context(|| format!("cannot write {}", json.display()))?;
        log::info!("wrote {} ({} rows)", csv.display(), table.len());
        self.written.push(csv);
        Ok(())
    }
}

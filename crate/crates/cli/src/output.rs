//! CSV tables and JSON run reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fewbound_core::SolverConfig;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => sig12(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

/// Twelve significant digits, plain notation where that stays readable.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match the header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell of the given row by column name.
    pub fn get(&self, row: usize, name: &str) -> Option<&Cell> {
        self.rows.get(row)?.get(self.column(name)?)
    }
}

/// Provenance written at the top of every CSV and into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub experiment: String,
    pub seed: u64,
    pub budget: String,
    pub solver: SolverConfig,
    pub convention: String,
}

impl RunMeta {
    fn header_lines(&self) -> Vec<String> {
        let s = &self.solver;
        vec![
            format!("fewbound {}", self.experiment),
            "units: hbar = 1; H = sum_i p_i^2/2m + sum_{i<j} V(r_ij), internal (centre-of-mass free) energies".into(),
            format!("seed: {}", self.seed),
            format!(
                "budget: {} (candidates {}, refinements {}, basis <= {} for N <= 3 and <= {} for N = 4)",
                self.budget, s.candidates, s.refinements, s.max_basis, s.max_basis_four
            ),
            format!("convention: {}", self.convention),
        ]
    }
}

/// Writes `<dir>/<stem>.csv` with a commented metadata header.
pub fn write_csv(dir: &Path, stem: &str, meta: &RunMeta, table: &Table) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!("{stem}.csv"));
    let mut file =
        fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    for line in meta.header_lines() {
        writeln!(file, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(file);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(path)
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    meta: &'a RunMeta,
    results: &'a T,
}

/// Writes `<dir>/<stem>.json` holding the metadata and the detailed results.
pub fn write_report<T: Serialize>(
    dir: &Path,
    stem: &str,
    meta: &RunMeta,
    results: &T,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.json"));
    let text = serde_json::to_string_pretty(&Report { meta, results })?;
    fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Reads back a CSV written by [`write_csv`], skipping the metadata lines.
pub fn read_csv(path: &Path) -> Result<Table> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    let columns = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .map(|s| {
                    if s.is_empty() {
                        Cell::Empty
                    } else if let Ok(i) = s.parse::<i64>() {
                        Cell::Int(i)
                    } else if let Ok(x) = s.parse::<f64>() {
                        Cell::Num(x)
                    } else {
                        Cell::Text(s.to_string())
                    }
                })
                .collect(),
        );
    }
    Ok(Table { columns, rows })
}

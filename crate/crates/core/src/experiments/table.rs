//! Minimal numeric CSV tables: header row, comma separated, 15 significant
//! digits.

use std::io::{Read, Write};

use crate::grid_field::fmt_sig;
use crate::{Error, Result};

/// A cell: numbers are written with 15 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_sig(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn write_table<W: Write>(w: W, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for r in rows {
        out.write_record(r.iter().map(Cell::render))?;
    }
    out.flush()?;
    Ok(())
}

/// Column names and raw string rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Reads a headed CSV; an empty input gives an empty table.
    pub fn read<R: Read>(r: R) -> Result<Table> {
        let mut rd = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(r);
        let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in rd.records() {
            rows.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Table { header, rows })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Csv(format!("missing column `{name}`")))
    }

    /// Numeric column; unparsable cells become NaN.
    pub fn numeric(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        Ok(self
            .rows
            .iter()
            .map(|r| r.get(i).and_then(|s| s.parse().ok()).unwrap_or(f64::NAN))
            .collect())
    }
}

//! In-memory result tables and their CSV encoding.
//!
//! Tables are rendered to bytes before anything touches the filesystem, so a
//! run either writes a complete file or none at all.

use std::io::Write;
use std::path::Path;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// Reals use 17 significant digits, enough to round-trip any f64.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Summary lines, written after the rows with a leading `# `.
    pub footer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.footer.push(line.into());
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric value of `name` in each row; `None` for empty or textual cells.
    pub fn reals(&self, name: &str) -> Vec<Option<f64>> {
        let Some(col) = self.column(name) else {
            return vec![None; self.rows.len()];
        };
        self.rows
            .iter()
            .map(|r| match r[col] {
                Cell::Real(v) => Some(v),
                Cell::Int(v) => Some(v as f64),
                _ => None,
            })
            .collect()
    }

    pub fn text(&self, row: usize, name: &str) -> Option<&str> {
        match &self.rows[row][self.column(name)?] {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let encode = |e: csv::Error| HarnessError::MalformedCsv(e.to_string());
        w.write_record(&self.header).map_err(encode)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(encode)?;
        }
        let mut out = w.into_inner().map_err(|e| HarnessError::MalformedCsv(e.to_string()))?;
        for line in &self.footer {
            writeln!(out, "# {line}").expect("writing to a Vec cannot fail");
        }
        Ok(out)
    }

    /// Writes to `path`, or to stdout when `None`.
    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        let bytes = self.to_csv()?;
        match path {
            Some(p) => std::fs::write(p, bytes).map_err(|e| HarnessError::io(p, e)),
            None => std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| HarnessError::io("<stdout>", e)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip_through_text() {
        for v in [0.1, 1.0 / 3.0, 2.5e-300, -7.0, f64::MIN_POSITIVE] {
            let s = Cell::Real(v).render();
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1usize.into(), 0.5.into()]);
        t.push(vec![Cell::Empty, "x,y".into()]);
        t.note("min=0");
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "a,b\n1,5.0000000000000000e-1\n,\"x,y\"\n# min=0\n");
        assert_eq!(t.reals("b")[0], Some(0.5));
        assert_eq!(t.reals("b")[1], None);
    }

    #[test]
    #[should_panic]
    fn rejects_ragged_rows() {
        Table::new(&["a"]).push(vec![Cell::Empty, Cell::Empty]);
    }
}

//! Tab-separated tables with a header row.
//!
//! Reals are written in Rust's shortest round-trip form, so parsing a written
//! table recovers every value bit for bit. Summary notes follow the rows as
//! lines starting with `# `.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn encode(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format!("{x:?}"),
            Cell::Text(s) => s.replace(['\t', '\n', '\r'], " "),
        }
    }

    fn decode(s: &str) -> Self {
        if let Ok(i) = s.parse::<i64>() {
            Cell::Int(i)
        } else if let Ok(x) = s.parse::<f64>() {
            Cell::Real(x)
        } else {
            Cell::Text(s.to_string())
        }
    }

    /// Fixed-point rendering for terminal tables.
    pub fn display(&self, decimals: usize) -> String {
        match self {
            Cell::Real(x) => format!("{x:.decimals$}"),
            other => other.encode(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Real(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
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

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into().replace(['\n', '\r'], " "));
    }

    /// Appends a row; panics if its width differs from the header's.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::encode).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Input("table has no header".into()))?
            .split('\t')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        let mut notes = Vec::new();
        for (k, line) in lines.enumerate() {
            if let Some(note) = line.strip_prefix("# ") {
                notes.push(note.to_string());
                continue;
            }
            let row: Vec<Cell> = line.split('\t').map(Cell::decode).collect();
            if row.len() != header.len() {
                return Err(Error::Input(format!(
                    "row {} has {} cells, header has {}",
                    k + 1,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { header, rows, notes })
    }

    /// Space-aligned rendering with reals at `decimals` places.
    pub fn render(&self, decimals: usize) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.display(decimals)).collect())
            .collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([self.header[j].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &self.header);
        for r in &cells {
            line(&mut out, r);
        }
        for note in &self.notes {
            let _ = writeln!(out, "{note}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let mut t = Table::new(["rank", "lambda", "method"]);
        t.push(vec![1usize.into(), (8.0 / 15.0).into(), "closed_form".into()]);
        t.push(vec![2usize.into(), 1e-300.into(), "quadrature".into()]);
        t.push(vec![3usize.into(), (-0.8).into(), "a\tb".into()]);
        t.note("winner 1,2,3");
        let parsed = Table::from_tsv(&t.to_tsv()).unwrap();
        assert_eq!(parsed.to_tsv(), t.to_tsv());
        assert_eq!(parsed.rows[0][1], Cell::Real(8.0 / 15.0));
        assert_eq!(parsed.rows[2][2], Cell::Text("a b".into()));
        assert_eq!(parsed.column("lambda"), Some(1));
        assert_eq!(parsed.notes, ["winner 1,2,3"]);
    }

    #[test]
    fn render_fixes_decimals() {
        let mut t = Table::new(["k", "x"]);
        t.push(vec![1usize.into(), (-0.8).into()]);
        assert_eq!(t.render(6), "k          x\n1  -0.800000\n");
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(Table::from_tsv("a\tb\n1\n").is_err());
        assert!(Table::from_tsv("").is_err());
    }
}

//! Tabular output shared by the library reports and the command-line tool.
//!
//! Reals are printed with 15 significant digits; exact values travel as
//! `a/b` strings next to their floating-point approximation.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// 15-significant-digit rendering used in every CSV and text table.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (14 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.14e}")
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => fmt_real(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Real(x) if x.is_finite() => json!(x),
            Cell::Real(x) => json!(x.to_string()),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

/// A titled table with free-form header comments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub title: String,
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            title: title.into(),
            comments: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(serde_json::to_string_pretty(&self.to_json())
                .map_err(|e| Error::Io(e.to_string()))?
                + "\n"),
            Format::Text => Ok(self.to_text()),
        }
    }

    /// CSV with `#`-prefixed header comments.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.title));
        for c in &self.comments {
            out.push_str(&format!("# {c}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?);
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (k, v) in self.columns.iter().zip(row) {
                    m.insert(k.clone(), v.to_json());
                }
                Value::Object(m)
            })
            .collect();
        json!({ "title": self.title, "comments": self.comments, "rows": rows })
    }

    pub fn to_text(&self) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &rendered {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = format!("{}\n", self.title);
        for c in &self.comments {
            out.push_str(&format!("  {c}\n"));
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        out.push_str(&line(&self.columns));
        out.push('\n');
        for row in &rendered {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    /// Observed deviation or value.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `deviation <= tolerance` (NaN fails).
    pub fn within(id: impl Into<String>, deviation: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            passed: deviation <= tolerance,
            value: deviation,
            tolerance,
            detail: detail.into(),
        }
    }

    pub fn boolean(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            passed,
            value: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
            detail: detail.into(),
        }
    }

    /// Converts a failed check into an error.
    pub fn into_result(self) -> Result<Check> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::CheckFailed { id: self.id, detail: self.detail })
        }
    }
}

/// Named list of checks, serialised as `{title, passed, checks}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        CheckReport { title: title.into(), passed, checks }
    }

    pub fn extend(&mut self, more: impl IntoIterator<Item = Check>) {
        self.checks.extend(more);
        self.passed = self.checks.iter().all(|c| c.passed);
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn table(&self) -> Table {
        checks_table(&self.title, &self.checks)
    }
}

/// Table view of a list of checks.
pub fn checks_table(title: &str, checks: &[Check]) -> Table {
    let mut t = Table::new(title, &["id", "passed", "value", "tolerance", "detail"]);
    for c in checks {
        t.push(vec![
            c.id.clone().into(),
            c.passed.into(),
            c.value.into(),
            c.tolerance.into(),
            c.detail.clone().into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(2.5), "2.5");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_real(53.0 / 18.0), "2.94444444444444");
        assert_eq!(fmt_real(-1e-9), "-1.00000000000000e-9");
        assert_eq!(fmt_real(100.0), "100");
    }

    #[test]
    fn table_formats() {
        let mut t = Table::new("demo", &["n", "value", "exact"]);
        t.comment("q=1");
        t.push(vec![1usize.into(), 0.5.into(), "1/2".into()]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv, "# demo\n# q=1\nn,value,exact\n1,0.5,1/2\n");
        let js = t.to_json();
        assert_eq!(js["rows"][0]["exact"], "1/2");
        assert!(t.to_text().contains("1/2"));
        assert!("xml".parse::<Format>().is_err());
    }
}

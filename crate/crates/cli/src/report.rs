//! Structured command reports and their renderers.
//!
//! Every subcommand produces one [`Report`]: command metadata, zero or
//! more tables, a metric map, pass/fail checks, and provenance notes.
//! The same report renders to markdown, CSV, or JSON. Markdown and CSV
//! cells are rounded for display; the JSON document always carries the
//! full-precision values and round-trips losslessly, so it is the form
//! to consume programmatically (`schema/report.schema.json`).
//!
//! Determinism contract: rendering depends only on the report content
//! and the precision argument. Maps are ordered (`BTreeMap`), vectors
//! keep insertion order, and no timestamps or paths enter the output,
//! so identical inputs yield byte-identical documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Default decimal places for markdown and CSV cells.
pub const DEFAULT_PRECISION: u8 = 4;

/// One table cell. `Int` keeps counts and indices free of decimal
/// points; `Number` cells are rounded for display but serialized to
/// JSON in full precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Text(String),
    Int(u64),
    Number(f64),
}

impl Cell {
    fn render(&self, precision: u8) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Number(x) => render_number(*x, precision),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

/// Display form of a float: fixed-point for ordinary magnitudes,
/// scientific otherwise, both at `precision` decimals. Rust's float
/// formatting rounds the exact decimal expansion half-to-even, which
/// is the rounding this crate documents for rendered cells.
pub fn render_number(x: f64, precision: u8) -> String {
    let p = usize::from(precision);
    if x == 0.0 || (1e-3..1e7).contains(&x.abs()) {
        format!("{x:.p$}")
    } else {
        format!("{x:.p$e}")
    }
}

/// A named table: fixed column order, rows of cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// One verification check. `observed` is the measured residual or
/// statistic, `bound` the threshold it was held against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub bound: f64,
}

impl Check {
    pub fn against(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            passed: observed.is_finite() && observed <= bound,
            observed,
            bound,
        }
    }
}

/// The output of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub inputs: BTreeMap<String, String>,
    pub tables: Vec<Table>,
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            inputs: BTreeMap::new(),
            tables: Vec::new(),
            metrics: BTreeMap::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_owned(), value.to_string());
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_owned(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// True when every check passed (vacuously true without checks);
    /// drives the process exit code.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_markdown(&self, precision: u8) -> String {
        let mut out = String::new();
        out.push_str(&format!("# qstoch {}\n\n", self.command));
        out.push_str(&format!("version: {}\n\n", self.version));
        if !self.inputs.is_empty() {
            out.push_str("| input | value |\n| --- | --- |\n");
            for (k, v) in &self.inputs {
                out.push_str(&format!("| {} | {} |\n", md_escape(k), md_escape(v)));
            }
            out.push('\n');
        }
        for table in &self.tables {
            out.push_str(&format!("## {}\n\n", table.name));
            out.push('|');
            for c in &table.columns {
                out.push_str(&format!(" {} |", md_escape(c)));
            }
            out.push_str("\n|");
            for _ in &table.columns {
                out.push_str(" --- |");
            }
            out.push('\n');
            for row in &table.rows {
                out.push('|');
                for cell in row {
                    out.push_str(&format!(" {} |", md_escape(&cell.render(precision))));
                }
                out.push('\n');
            }
            out.push('\n');
        }
        if !self.metrics.is_empty() {
            out.push_str("## metrics\n\n| metric | value |\n| --- | --- |\n");
            for (k, v) in &self.metrics {
                out.push_str(&format!(
                    "| {} | {} |\n",
                    md_escape(k),
                    render_number(*v, precision)
                ));
            }
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str("## checks\n\n| check | observed | bound | status |\n");
            out.push_str("| --- | --- | --- | --- |\n");
            for c in &self.checks {
                out.push_str(&format!(
                    "| {} | {:.6e} | {:.6e} | {} |\n",
                    md_escape(&c.name),
                    c.observed,
                    c.bound,
                    if c.passed { "pass" } else { "FAIL" }
                ));
            }
            out.push('\n');
        }
        if !self.notes.is_empty() {
            out.push_str("## notes\n\n");
            for n in &self.notes {
                out.push_str(&format!("- {}\n", md_escape(n)));
            }
            out.push('\n');
        }
        out
    }

    /// RFC 4180 records with CRLF endings. Line layout is record-typed:
    /// the first field names the record kind, so mixed-arity sections
    /// stay machine-parseable.
    pub fn render_csv(&self, precision: u8) -> String {
        let mut out = String::new();
        csv_record(&mut out, &["command", &self.command, &self.version]);
        for (k, v) in &self.inputs {
            csv_record(&mut out, &["input", k, v]);
        }
        for table in &self.tables {
            let mut header: Vec<&str> = vec!["table", &table.name];
            header.extend(table.columns.iter().map(String::as_str));
            csv_record(&mut out, &header);
            for row in &table.rows {
                let cells: Vec<String> =
                    row.iter().map(|c| c.render(precision)).collect();
                let mut fields: Vec<&str> = vec!["row", &table.name];
                fields.extend(cells.iter().map(String::as_str));
                csv_record(&mut out, &fields);
            }
        }
        for (k, v) in &self.metrics {
            csv_record(&mut out, &["metric", k, &render_number(*v, precision)]);
        }
        for c in &self.checks {
            csv_record(
                &mut out,
                &[
                    "check",
                    &c.name,
                    &format!("{:.6e}", c.observed),
                    &format!("{:.6e}", c.bound),
                    if c.passed { "pass" } else { "fail" },
                ],
            );
        }
        for n in &self.notes {
            csv_record(&mut out, &["note", n]);
        }
        out
    }

    /// Full-precision document; floats round-trip exactly.
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self)
            .expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

/// Pipes would break table geometry; newlines would break the line
/// orientation of the whole document.
fn md_escape(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn csv_record(out: &mut String, fields: &[&str]) {
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        if f.contains(['"', ',', '\r', '\n']) {
            out.push('"');
            out.push_str(&f.replace('"', "\"\""));
            out.push('"');
        } else {
            out.push_str(f);
        }
    }
    out.push_str("\r\n");
}

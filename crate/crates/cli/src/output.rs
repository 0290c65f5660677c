//! Serialised products: JSON documents and CSV tables.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Version of the JSON and CSV layouts.
pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Number with 17 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Outcome of a command that still writes its output.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    /// Not-found or undetermined result: written, then exit code 3.
    Incomplete(String),
}

/// Everything a command produces.
#[derive(Debug, Clone)]
pub struct Product {
    pub command: &'static str,
    pub input: Value,
    pub result: Value,
    pub table: Option<Table>,
    pub svg: Option<String>,
    pub default_format: Format,
    pub status: Status,
}

fn meta() -> Value {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut m = Map::new();
    m.insert("generator".into(), Value::String(format!("bazykin {}", env!("CARGO_PKG_VERSION"))));
    m.insert("unix_time".into(), Value::from(secs));
    Value::Object(m)
}

/// JSON document; keys are emitted in sorted order.
pub fn render_json(p: &Product, with_meta: bool) -> String {
    let mut doc = Map::new();
    doc.insert("schema".into(), Value::from(SCHEMA));
    doc.insert("command".into(), Value::String(p.command.into()));
    doc.insert("input".into(), p.input.clone());
    doc.insert("result".into(), p.result.clone());
    if with_meta {
        doc.insert("meta".into(), meta());
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// CSV table, preceded by a `#` comment line unless `with_meta` is false.
pub fn render_csv(p: &Product, with_meta: bool) -> CliResult<String> {
    let table = p
        .table
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{} has no CSV form; use --format json", p.command)))?;
    let mut out = Vec::new();
    if with_meta {
        let m = meta();
        writeln!(out, "# schema={SCHEMA} generator={} unix_time={}", m["generator"].as_str().unwrap_or(""), m["unix_time"])
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&table.header).map_err(io)?;
        for row in &table.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    }
    String::from_utf8(out).map_err(|e| CliError::Io(e.to_string()))
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

//! Tabular records rendered as CSV with `#` headers, or as one JSON object.

use crate::config::{Format, RunConfig};
use anyhow::Result;
use serde_json::{json, Map, Value};
use std::io::Write;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(Option<f64>),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(Some(v)) => format_float(*v),
            Cell::Float(None) => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(Some(v)) => json!(v),
            Cell::Float(None) => Value::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(Some(v))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Float(v)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// 17 significant digits.
pub fn format_float(v: f64) -> String {
    // Adding 0.0 maps −0.0 to 0.0.
    format!("{:.16e}", v + 0.0)
}

/// Output of one subcommand.
#[derive(Debug, Clone)]
pub struct Document {
    pub command: &'static str,
    pub config: RunConfig,
    /// Extra `key: value` header lines.
    pub header: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Trailing `key: value` lines.
    pub footer: Vec<(String, String)>,
}

impl Document {
    pub fn new(command: &'static str, config: RunConfig, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            config,
            header: Vec::new(),
            columns,
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> Result<String> {
        let mut out = Vec::new();
        writeln!(out, "# eup-coulomb {VERSION}")?;
        writeln!(out, "# command: {}", self.command)?;
        writeln!(out, "# config: {}", serde_json::to_string(&self.config)?)?;
        for (k, v) in &self.header {
            writeln!(out, "# {k}: {v}")?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::csv))?;
            }
            w.flush()?;
        }
        for (k, v) in &self.footer {
            writeln!(out, "# {k}: {v}")?;
        }
        Ok(String::from_utf8(out)?)
    }

    fn json(&self) -> Result<String> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(m)
            })
            .collect();
        let pairs =
            |v: &[(String, String)]| -> Map<String, Value> { v.iter().map(|(k, x)| (k.clone(), json!(x))).collect() };
        let doc = json!({
            "version": VERSION,
            "command": self.command,
            "config": self.config,
            "header": pairs(&self.header),
            "records": records,
            "footer": pairs(&self.footer),
        });
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }
}

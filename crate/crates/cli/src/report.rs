//! Command results and their text, CSV and JSON renderings.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use nncalc::{Expr, NNError, NNReal};
use serde_json::{Map, Value};

use crate::error::CliResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print plain values instead of natural logs.
    #[arg(long)]
    pub linear: bool,
}

impl OutputArgs {
    pub fn scale(&self) -> Scale {
        Scale {
            linear: self.linear,
        }
    }
}

/// Log-space or plain rendering of NN quantities.
#[derive(Clone, Copy, Debug)]
pub struct Scale {
    pub linear: bool,
}

impl Scale {
    /// Column or field name: `name_log` in log mode, `name` in linear mode.
    pub fn name(self, base: &str) -> String {
        if self.linear {
            base.to_string()
        } else {
            format!("{base}_log")
        }
    }

    pub fn number(self, v: NNReal) -> CliResult<Value> {
        let x = if self.linear { v.value() } else { v.log() };
        num(x)
    }

    /// Human-readable literal: `e^1.5` style in log mode.
    pub fn literal(self, v: NNReal) -> String {
        if self.linear {
            v.value().to_string()
        } else {
            Expr::constant(v).pretty()
        }
    }
}

/// A finite JSON number.
pub fn num(x: f64) -> CliResult<Value> {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .ok_or_else(|| NNError::Range(format!("{x} cannot be rendered")).into())
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

/// What a command produced. Text mode prints `lines` and then the table;
/// JSON prints `fields` and the table; CSV prints the table, or the
/// fields as `key,value` pairs when there is none.
pub struct Report {
    pub command: &'static str,
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
    pub lines: Vec<String>,
    pub table_in_text: bool,
    pub table_in_json: bool,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            fields: Map::new(),
            table: None,
            lines: Vec::new(),
            table_in_text: true,
            table_in_json: true,
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.fields.insert(key.into(), value.into());
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("version".into(), VERSION.into());
        obj.insert("command".into(), self.command.into());
        for (k, v) in &self.fields {
            obj.insert(k.clone(), v.clone());
        }
        if let Some(t) = self.table.as_ref().filter(|_| self.table_in_json) {
            let mut table = Map::new();
            table.insert("columns".into(), t.columns.clone().into());
            table.insert(
                "rows".into(),
                Value::Array(t.rows.iter().map(|r| Value::Array(r.clone())).collect()),
            );
            obj.insert("table".into(), Value::Object(table));
        }
        Value::Object(obj)
    }

    pub fn render<W: Write>(&self, format: Format, out: &mut W) -> CliResult<()> {
        match format {
            Format::Text => {
                for l in &self.lines {
                    writeln!(out, "{l}")?;
                }
                if let Some(t) = self.table.as_ref().filter(|_| self.table_in_text) {
                    writeln!(out, "{}", t.columns.join(" "))?;
                    for r in &t.rows {
                        let cells: Vec<String> = r.iter().map(cell).collect();
                        writeln!(out, "{}", cells.join(" "))?;
                    }
                }
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())
                    .map_err(|e| NNError::Input(e.to_string()))?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                match &self.table {
                    Some(t) => {
                        w.write_record(&t.columns)?;
                        for r in &t.rows {
                            w.write_record(r.iter().map(cell))?;
                        }
                    }
                    None => {
                        w.write_record(["key", "value"])?;
                        for (k, v) in &self.fields {
                            w.write_record([k.clone(), cell(v)])?;
                        }
                    }
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

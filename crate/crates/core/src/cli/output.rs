use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use super::config::Format;
use super::CliError;

/// 17 significant digits, enough to round-trip any double.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => fmt_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => float_value(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
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

/// A JSON number printed with 17 significant digits; `null` if not finite.
pub fn float_value(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt_float(x)).expect("formatted float is a JSON number"))
    } else {
        Value::Null
    }
}

/// Ordered key/value pairs for the `meta.parameters` and `summary` objects.
#[derive(Debug, Clone, Default)]
pub struct Record(Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn float(mut self, key: &str, x: f64) -> Self {
        self.0.push((key.to_string(), float_value(x)));
        self
    }

    pub fn text(mut self, key: &str, s: impl Into<String>) -> Self {
        self.0.push((key.to_string(), Value::from(s.into())));
        self
    }

    pub fn value(mut self, key: &str, v: Value) -> Self {
        self.0.push((key.to_string(), v));
        self
    }

    pub fn opt_float(self, key: &str, x: Option<f64>) -> Self {
        match x {
            Some(x) => self.float(key, x),
            None => self,
        }
    }

    fn into_value(self) -> Value {
        Value::Object(self.0.into_iter().collect::<Map<_, _>>())
    }
}

/// A table with a single header row, plus the metadata of the run.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub parameters: Record,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Record,
}

impl Report {
    pub fn new(command: impl Into<String>, parameters: Record, columns: Vec<&'static str>) -> Self {
        Report {
            command: command.into(),
            parameters,
            columns,
            rows: Vec::new(),
            summary: Record::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.into_inner()
            .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
    }

    fn render_json(&self) -> Result<Vec<u8>, CliError> {
        let data: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let meta = Record::new()
            .text("command", self.command.as_str())
            .value("parameters", self.parameters.clone().into_value())
            .text("version", env!("CARGO_PKG_VERSION"));
        let doc = Record::new()
            .value("meta", meta.into_value())
            .value("data", Value::Array(data))
            .value("summary", self.summary.clone().into_value());
        let mut out = serde_json::to_vec_pretty(&doc.into_value())?;
        out.push(b'\n');
        Ok(out)
    }

    /// Writes to `path`, creating its directory, or to stdout.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<(), CliError> {
        let bytes = self.render(format)?;
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(p, bytes)?;
            }
            None => std::io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}

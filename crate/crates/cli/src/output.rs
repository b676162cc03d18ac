//! Output records and their JSON, CSV and plain renderings.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    #[default]
    Json,
    /// A header row followed by one row per record.
    Csv,
    /// The `value` field alone when present, otherwise `key=value` pairs.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Exact,
    Numeric,
    Report,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Exact => "exact",
            Kind::Numeric => "numeric",
            Kind::Report => "report",
        }
    }
}

/// An ordered set of fields, always starting with `kind`.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    fields: Map<String, Value>,
}

impl Record {
    pub fn new(kind: Kind) -> Self {
        let mut fields = Map::new();
        fields.insert("kind".into(), kind.as_str().into());
        Self { fields }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn fields(&self) -> &Map<String, Value> {
        &self.fields
    }
}

/// JSON has no infinities; non-finite bounds become `null`.
pub fn finite(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_records(out: &mut dyn Write, format: Format, records: &[Record]) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, &r.fields)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Plain => {
            for r in records {
                match r.fields.get("value") {
                    Some(v) => writeln!(out, "{}", cell(v))?,
                    None => {
                        let parts: Vec<String> =
                            r.fields.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
                        writeln!(out, "{}", parts.join(" "))?;
                    }
                }
            }
        }
        Format::Csv => {
            let mut header: Vec<&str> = Vec::new();
            for r in records {
                for k in r.fields.keys() {
                    if !header.contains(&k.as_str()) {
                        header.push(k);
                    }
                }
            }
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&header)?;
            for r in records {
                w.write_record(header.iter().map(|k| r.fields.get(*k).map(cell).unwrap_or_default()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

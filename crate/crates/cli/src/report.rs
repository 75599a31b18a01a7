use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The JSON document every command prints.
#[derive(Serialize, Debug)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub results: Value,
    pub pass: bool,
    pub version: &'static str,
}

impl Report {
    pub fn new(
        command: &'static str,
        config: impl Serialize,
        results: impl Serialize,
        pass: bool,
    ) -> Result<Self, CliError> {
        Ok(Self {
            command,
            config: serde_json::to_value(config)?,
            results: serde_json::to_value(results)?,
            pass,
            version: VERSION,
        })
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// A CSV file to be written next to the report.
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn write(&self, dir: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(dir.join(self.name))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Formats a float for CSV with round-trip precision.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_outputs(dir: &Path, json: &str, tables: &[Table], documents: &[(&str, String)]) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), json)?;
    for (name, body) in documents {
        fs::write(dir.join(name), body)?;
    }
    for t in tables {
        t.write(dir)?;
    }
    Ok(())
}

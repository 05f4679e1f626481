use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::json;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A header plus rows of floats.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn with_columns(names: &[&str]) -> Self {
        Self::new(names.iter().map(|s| s.to_string()).collect())
    }

    /// `x1, ..., xq`.
    pub fn coords(prefix: &str, q: usize) -> Vec<String> {
        (1..=q).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).map_err(CliError::io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|v| fmt_float(*v))).map_err(CliError::io)?;
                }
                w.into_inner().map_err(|e| CliError::io(e.into_error()))
            }
            Format::Json => {
                let v = json!({ "columns": self.columns, "rows": self.rows });
                Ok(serde_json::to_vec_pretty(&v).map_err(CliError::io)?)
            }
        }
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).map_err(CliError::io)?),
        None => Box::new(io::stdout().lock()),
    };
    sink.write_all(bytes).map_err(CliError::io)?;
    if !bytes.ends_with(b"\n") {
        sink.write_all(b"\n").map_err(CliError::io)?;
    }
    sink.flush().map_err(CliError::io)
}

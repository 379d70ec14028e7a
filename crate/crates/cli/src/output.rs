use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// Rounds to 12 significant digits so every format prints the same value.
pub fn sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn sig_opt(x: Option<f64>) -> Option<f64> {
    x.map(sig)
}

/// Output shape: one record or a table of them.
pub enum Records<'a, R> {
    One(&'a R),
    Many(&'a [R]),
}

impl<R> Records<'_, R> {
    fn rows(&self) -> &[R] {
        match self {
            Records::One(r) => std::slice::from_ref(*r),
            Records::Many(rs) => rs,
        }
    }
}

pub fn render<R: Serialize>(records: Records<'_, R>, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut text = match records {
                Records::One(r) => serde_json::to_string_pretty(r),
                Records::Many(rs) => serde_json::to_string_pretty(rs),
            }
            .map_err(|e| CliError::Output(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in records.rows() {
                w.serialize(row).map_err(|e| CliError::Output(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
        }
        Format::Human => human(records),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_fields<R: Serialize>(row: &R) -> Result<Vec<(String, String)>, CliError> {
    match serde_json::to_value(row).map_err(|e| CliError::Output(e.to_string()))? {
        Value::Object(map) => Ok(map.iter().map(|(k, v)| (k.clone(), cell(v))).collect()),
        other => Ok(vec![("value".to_string(), cell(&other))]),
    }
}

fn human<R: Serialize>(records: Records<'_, R>) -> Result<String, CliError> {
    let mut out = String::new();
    match records {
        Records::One(r) => {
            let fields = to_fields(r)?;
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in fields {
                out.push_str(&format!("{k:<width$}  {v}\n"));
            }
        }
        Records::Many(rs) => {
            let table = rs.iter().map(to_fields).collect::<Result<Vec<_>, _>>()?;
            let Some(first) = table.first() else {
                return Ok(out);
            };
            let headers: Vec<&str> = first.iter().map(|(k, _)| k.as_str()).collect();
            let widths: Vec<usize> = (0..headers.len())
                .map(|i| table.iter().map(|row| row[i].1.chars().count()).chain([headers[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            out.push_str(&line(headers.clone()));
            for row in &table {
                out.push_str(&line(row.iter().map(|(_, v)| v.as_str()).collect()));
            }
        }
    }
    Ok(out)
}

pub fn write(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e)),
    }
}

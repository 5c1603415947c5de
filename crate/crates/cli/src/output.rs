//! CSV and JSONL sinks. Files are written through a temporary file in the
//! target directory and renamed into place, so a failed run leaves nothing.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Floating-point values with 17 significant digits.
pub fn f17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.16e}")
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Table {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Rendered output: a table for CSV or a list of JSON values.
pub fn render_csv(table: &Table) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).map_err(io_err)?;
    for r in &table.rows {
        w.write_record(r).map_err(io_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn render_jsonl<T: Serialize>(values: &[T]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    for v in values {
        serde_json::to_writer(&mut buf, v).map_err(|e| CliError::Io(e.to_string()))?;
        buf.push(b'\n');
    }
    Ok(buf)
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

/// Writes `bytes` to `out` atomically, or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(io_err)?;
            stdout.flush().map_err(io_err)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            std::fs::create_dir_all(&dir).map_err(io_err)?;
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
            tmp.write_all(bytes).map_err(io_err)?;
            tmp.flush().map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            Ok(())
        }
    }
}

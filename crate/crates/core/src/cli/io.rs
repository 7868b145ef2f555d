//! CSV and JSON input/output.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::Format;
use crate::error::{Error, Result};
use crate::fit::DataSeries;

/// Shortest round-trip text for `v`; scientific notation outside
/// `[1e-4, 1e6)` so tiny values stay compact.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// A table of named columns, each cell already rendered as text.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_numbers(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|v| format_number(*v)).collect());
    }

    pub fn push(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))
    }

    /// Array of objects; numeric-looking cells become JSON numbers.
    fn to_json(&self) -> Result<Vec<u8>> {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| {
                self.header
                    .iter()
                    .zip(r)
                    .map(|(h, c)| {
                        let v = c
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .and_then(serde_json::Number::from_f64)
                            .map(serde_json::Value::Number)
                            .unwrap_or_else(|| serde_json::Value::String(c.clone()));
                        (h.clone(), v)
                    })
                    .collect()
            })
            .collect();
        json_bytes(&rows)
    }
}

/// Writes `table` as `<stem>.csv` or `<stem>.json`; returns the file name.
pub fn write_table(dir: &Path, stem: &str, table: &Table, format: Format) -> Result<String> {
    let (name, bytes) = match format {
        Format::Csv => (format!("{stem}.csv"), table.to_csv()?),
        Format::Json => (format!("{stem}.json"), table.to_json()?),
    };
    fs::write(dir.join(&name), bytes)?;
    Ok(name)
}

pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

pub fn write_json<T: Serialize + ?Sized>(dir: &Path, name: &str, value: &T) -> Result<String> {
    fs::write(dir.join(name), json_bytes(value)?)?;
    Ok(name.to_string())
}

/// Reads a two-column CSV whose header must be `columns`. Lines starting
/// with `#` are comments.
pub fn read_series(text: &str, columns: [&str; 2]) -> Result<DataSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        None => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "empty file: expected a header row".into(),
            })
        }
        Some(r) => r.map_err(csv_error)?,
    };
    let header_line = header.position().map_or(1, |p| p.line());
    if header.len() != 2 {
        return Err(Error::Parse {
            line: header_line,
            column: header.len().min(2) + 1,
            message: format!("expected header `{},{}`", columns[0], columns[1]),
        });
    }
    for (i, (got, want)) in header.iter().zip(columns).enumerate() {
        if got != want {
            return Err(Error::Parse {
                line: header_line,
                column: i + 1,
                message: format!("expected column `{want}`, found `{got}`"),
            });
        }
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(Error::Parse {
                line,
                column: rec.len().min(2) + 1,
                message: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        for (i, cell) in rec.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                column: i + 1,
                message: format!("`{cell}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    column: i + 1,
                    message: format!("`{cell}` is not finite"),
                });
            }
            if i == 0 {
                x.push(v);
            } else {
                y.push(v);
            }
        }
    }
    if x.is_empty() {
        return Err(Error::Parse {
            line: header_line + 1,
            column: 1,
            message: "no data rows".into(),
        });
    }
    Ok(DataSeries::new(x, y)?.labeled(columns[0], columns[1]))
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        column: 1,
        message: e.to_string(),
    }
}

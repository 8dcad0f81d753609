//! Column-oriented command output as CSV or a JSON envelope.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};
use wavepacket_core::output::{csv_row, format_f64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Output {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Provenance recorded in the JSON envelope only.
    pub meta: Value,
}

impl Output {
    pub fn new(columns: &[&'static str], meta: Value) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            meta,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", csv_row(row))?;
        }
        Ok(())
    }

    fn envelope(&self) -> Value {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|v| format_f64(*v)).collect()).collect();
        json!({
            "meta": self.meta,
            "created_unix": created,
            "columns": self.columns,
            "rows": rows,
        })
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let mut sink: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        match format {
            Format::Csv => self.write_csv(&mut sink)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut sink, &self.envelope())?;
                writeln!(sink)?;
            }
        }
        sink.flush()?;
        Ok(())
    }
}

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use ckt_core::FgAbelianGroup;

pub const CSV_HEADER: &str = "degree,group,source";

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub degree: i64,
    /// `Z/8 ⊕ Z/2` style; parses back with `FgAbelianGroup::from_str`.
    pub group: String,
    pub canonical: FgAbelianGroup,
    pub source: String,
}

impl Record {
    pub fn new(degree: i64, g: &FgAbelianGroup, source: &str) -> Self {
        Record { degree, group: g.to_string(), canonical: g.clone(), source: source.to_string() }
    }
}

/// Writes a header and rows of plain fields.
pub fn csv_rows<R: AsRef<[u8]>>(out: &mut Vec<u8>, header: &[&str], rows: impl IntoIterator<Item = Vec<R>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv(out: &mut Vec<u8>, rows: &[Record]) -> Result<()> {
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    csv_rows(out, &header, rows.iter().map(|r| vec![r.degree.to_string(), r.group.clone(), r.source.clone()]))
}

pub fn json_doc(out: &mut Vec<u8>, command: &str, params: Value, key: &str, body: Value) -> Result<()> {
    let mut doc = json!({"command": command, "params": params});
    doc[key] = body;
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

pub fn table(out: &mut Vec<u8>, fmt: Format, command: &str, params: Value, rows: &[Record]) -> Result<()> {
    match fmt {
        Format::Csv => csv(out, rows)?,
        Format::Json => json_doc(out, command, params, "records", serde_json::to_value(rows)?)?,
        Format::Text => {
            let width = rows.iter().map(|r| r.group.chars().count()).max().unwrap_or(0).max(5);
            writeln!(out, "{:>6}  {:<width$}  source", "degree", "group")?;
            for r in rows {
                let pad = width - r.group.chars().count();
                writeln!(out, "{:>6}  {}{}  {}", r.degree, r.group, " ".repeat(pad), r.source)?;
            }
        }
    }
    Ok(())
}

pub fn scalar(out: &mut Vec<u8>, fmt: Format, command: &str, params: Value, key: &str, value: u64) -> Result<()> {
    match fmt {
        Format::Text => writeln!(out, "{value}")?,
        Format::Csv => {
            let name = params.as_object().and_then(|o| o.keys().next().cloned()).unwrap_or_default();
            csv_rows(out, &[&name, key], [vec![params[&name].to_string(), value.to_string()]])?;
        }
        Format::Json => json_doc(out, command, params, key, json!(value))?,
    }
    Ok(())
}

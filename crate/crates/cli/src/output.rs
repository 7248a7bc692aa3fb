//! Serialization of correlation series and tomography checks, and the
//! two-column extraction used for plotting.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{Map, Value};

use qdmf_core::scenario::{CorrelationPoint, CorrelationSeries, TomographyCheck};

use crate::config::Format;

/// 12 significant digits.
pub fn fmt_number(x: f64) -> String {
    format!("{x:.11e}")
}

fn rounded(x: f64) -> Value {
    let r: f64 = fmt_number(x).parse().expect("formatted float parses");
    serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
}

fn write_table<W: Write>(out: W, header: &[&str], rows: &[Vec<f64>], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            for row in rows {
                w.write_record(row.iter().map(|&x| fmt_number(x)))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = header
                        .iter()
                        .zip(row)
                        .map(|(k, &v)| (k.to_string(), rounded(v)))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &records)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn write_series<W: Write>(out: W, series: &CorrelationSeries, format: Format) -> Result<()> {
    let rows: Vec<Vec<f64>> = series.points.iter().map(|p| p.values().to_vec()).collect();
    write_table(out, &CorrelationPoint::FIELDS, &rows, format)
}

pub const TOMOGRAPHY_FIELDS: [&str; 9] = [
    "t",
    "p11",
    "p10",
    "p01",
    "p00",
    "fidelity",
    "residual",
    "coherence",
    "phase_recovered",
];

pub fn write_tomography<W: Write>(out: W, check: &TomographyCheck, format: Format) -> Result<()> {
    let rows: Vec<Vec<f64>> = check
        .rows
        .iter()
        .map(|r| {
            let p = &r.record.probabilities;
            vec![
                r.t,
                p.p11,
                p.p10,
                p.p01,
                p.p00,
                r.fidelity,
                r.residual,
                r.coherence,
                if r.phase_recovered() { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    write_table(out, &TOMOGRAPHY_FIELDS, &rows, format)
}

/// Reads `(t, measure)` pairs from a CSV or JSON file written by this tool.
pub fn extract_column(text: &str, measure: &str) -> Result<Vec<(String, String)>> {
    if text.trim_start().starts_with('[') {
        let records: Vec<Map<String, Value>> = serde_json::from_str(text).context("parsing JSON series")?;
        records
            .iter()
            .map(|r| {
                let get = |k: &str| {
                    r.get(k)
                        .and_then(Value::as_f64)
                        .map(fmt_number)
                        .ok_or_else(|| anyhow!("record has no numeric field '{k}'"))
                };
                Ok((get("t")?, get(measure)?))
            })
            .collect()
    } else {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let position = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| anyhow!("no column '{name}' (available: {})", headers.iter().collect::<Vec<_>>().join(", ")))
        };
        let (ti, mi) = (position("t")?, position(measure)?);
        reader
            .records()
            .map(|r| {
                let r = r?;
                Ok((r[ti].to_string(), r[mi].to_string()))
            })
            .collect()
    }
}

pub fn write_extraction<W: Write>(out: W, measure: &str, pairs: &[(String, String)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", measure])?;
    for (t, v) in pairs {
        w.write_record([t, v])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_input(path: &std::path::Path) -> Result<String> {
    let mut text = String::new();
    std::fs::File::open(path)
        .with_context(|| format!("opening {}", path.display()))?
        .read_to_string(&mut text)?;
    if text.trim().is_empty() {
        bail!("{} is empty", path.display());
    }
    Ok(text)
}

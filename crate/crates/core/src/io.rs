//! File formats: JSON with round-trip-safe floats, scan CSV, state input.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::sections::ScanResult;

/// Seventeen significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact JSON formatter printing every float with [`format_f64`].
/// Non-finite values become `null`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateInput {
    Matrix(ComplexMatrix),
    Bloch(BlochVector),
}

/// Reads either `{"dim", "entries"}` or `{"two_j", "params"}`.
pub fn parse_state(text: &str) -> Result<StateInput> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    if obj.contains_key("entries") {
        serde_json::from_value(value)
            .map(StateInput::Matrix)
            .map_err(|e| Error::Parse(format!("matrix: {e}")))
    } else if obj.contains_key("params") {
        serde_json::from_value(value)
            .map(StateInput::Bloch)
            .map_err(|e| Error::Parse(format!("Bloch vector: {e}")))
    } else {
        Err(Error::Parse(
            "expected a matrix {\"dim\", \"entries\"} or a Bloch vector {\"two_j\", \"params\"}".into(),
        ))
    }
}

/// Columns `s, t, norm_sq, F, class` with class 0 Allowed, 1 TraceBoundOnly, 2 Outside.
pub fn write_scan_csv<W: Write>(scan: &ScanResult, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["s", "t", "norm_sq", "F", "class"]).map_err(io_err)?;
    for p in &scan.points {
        w.write_record([
            format_f64(p.s),
            format_f64(p.t),
            format_f64(p.norm_sq),
            format_f64(p.f),
            (p.class as u8).to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

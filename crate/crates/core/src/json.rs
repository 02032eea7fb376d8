//! JSON helpers shared by the file formats and reports.
//!
//! Output is deterministic: keys come out sorted (serde_json's default map is a
//! `BTreeMap`) and every float is rounded to 12 significant digits.

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

/// Rounds to 12 significant digits; `-0.0` becomes `0.0`.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A JSON number rounded by [`round12`]; non-finite values become `null`.
pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn numbers(xs: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(xs.into_iter().map(number).collect())
}

/// Parses an array of arrays of numbers.
pub fn real_rows(v: &Value) -> Result<Vec<Vec<f64>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("expected a row array".into()))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| Error::Parse(format!("not a number: {x}"))))
                .collect()
        })
        .collect()
}

pub fn read_file(path: impl AsRef<Path>) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-printed with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

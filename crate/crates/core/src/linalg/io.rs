//! Matrix serialization: JSON nested arrays and CSV rows.

use super::{DenseMatrix, Matrix};
use crate::error::{Error, Result};

/// C `%.17g` formatting, enough digits to round-trip any `f64`.
pub fn format_g17(x: f64) -> String {
    format_g(x, 17)
}

fn format_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", precision - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= precision as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (precision as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn matrix_to_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let line: Vec<String> = row.iter().map(|v| format_g17(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_to_json(m: &DenseMatrix) -> serde_json::Value {
    serde_json::Value::from(m.to_rows())
}

/// Splits matrix text into rows of number tokens. JSON nested arrays when
/// the text starts with `[`, otherwise CSV (blank lines skipped).
pub fn matrix_tokens(text: &str) -> Result<Vec<Vec<String>>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::EmptyInput);
    }
    if trimmed.starts_with('[') {
        let value: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
        rows.iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("expected each row to be an array".into()))?
                    .iter()
                    .map(|v| match v {
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        other => Err(Error::Parse(format!("not a number: {other}"))),
                    })
                    .collect()
            })
            .collect()
    } else {
        Ok(trimmed
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.split(',').map(|t| t.trim().to_string()).collect())
            .collect())
    }
}

fn parse_rows(rows: Vec<Vec<String>>) -> Result<DenseMatrix> {
    let rows = rows
        .into_iter()
        .map(|row| {
            row.iter()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number `{t}`")))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(rows)?;
    m.ensure_finite()?;
    Ok(m)
}

pub fn matrix_from_text(text: &str) -> Result<DenseMatrix> {
    parse_rows(matrix_tokens(text)?)
}

pub fn matrix_from_json(text: &str) -> Result<DenseMatrix> {
    if !text.trim_start().starts_with('[') {
        return Err(Error::Parse("expected a JSON array".into()));
    }
    matrix_from_text(text)
}

pub fn matrix_from_csv(text: &str) -> Result<DenseMatrix> {
    if text.trim_start().starts_with('[') {
        return Err(Error::Parse("expected CSV rows, found JSON".into()));
    }
    matrix_from_text(text)
}

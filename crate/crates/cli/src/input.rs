//! Spectrum and matrix sources.

use crate::CliError;
use permreal::linalg::matrix_tokens;
use permreal::Spectrum;
use serde_json::Value;
use std::fs;
use std::path::Path;

fn json_token(v: &Value) -> Result<String, CliError> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.trim().to_string()),
        other => Err(CliError::Usage(format!("expected a number, found `{other}`"))),
    }
}

/// Splits an inline list on commas and whitespace.
pub fn inline_tokens(text: &str) -> Result<Vec<String>, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.iter().all(|p| p.is_empty()) {
        return Err(CliError::Usage("empty spectrum".into()));
    }
    let mut out = Vec::new();
    for p in parts {
        if p.is_empty() {
            return Err(CliError::Usage(format!("empty entry in `{text}`")));
        }
        out.extend(p.split_whitespace().map(str::to_string));
    }
    Ok(out)
}

/// A JSON array, or one value per line (commas also accepted); `#` starts
/// a comment line.
pub fn file_tokens(text: &str) -> Result<Vec<String>, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return Err(CliError::Usage("JSON spectrum must be an array".into()));
    }
    if trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| CliError::Usage(format!("bad JSON spectrum: {e}")))?;
        let Value::Array(items) = v else {
            return Err(CliError::Usage("JSON spectrum must be an array".into()));
        };
        if items.is_empty() {
            return Err(CliError::Usage("empty spectrum".into()));
        }
        return items.iter().map(json_token).collect();
    }
    let mut out = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.extend(inline_tokens(line)?);
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty spectrum".into()));
    }
    Ok(out)
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn spectrum_tokens(inline: Option<&str>, file: Option<&Path>) -> Result<Vec<String>, CliError> {
    match (inline, file) {
        (Some(text), None) => inline_tokens(text),
        (None, Some(path)) => file_tokens(&read_file(path)?),
        _ => Err(CliError::Usage("give exactly one of an inline spectrum or --file".into())),
    }
}

pub fn parse_spectrum(tokens: &[String]) -> Result<Spectrum, CliError> {
    let values = tokens
        .iter()
        .map(|t| t.parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Spectrum::new(values)?)
}

/// Matrix entries as strings in row order, from CSV, a JSON nested array,
/// or a JSON object with a `matrix` field.
pub fn matrix_token_rows(text: &str) -> Result<Vec<Vec<String>>, CliError> {
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad JSON: {e}")))?;
        let rows = v
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::Usage("JSON object has no `matrix` array".into()))?;
        return rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| CliError::Usage("matrix rows must be arrays".into()))?
                    .iter()
                    .map(json_token)
                    .collect()
            })
            .collect();
    }
    Ok(matrix_tokens(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_forms() {
        assert_eq!(inline_tokens("10,-1, -2 ,-3").unwrap(), ["10", "-1", "-2", "-3"]);
        assert_eq!(inline_tokens("1 2 3").unwrap(), ["1", "2", "3"]);
        assert!(inline_tokens("").is_err());
        assert!(inline_tokens(" , ").is_err());
        assert!(inline_tokens("1,,2").is_err());
    }

    #[test]
    fn file_forms() {
        assert_eq!(file_tokens("[10, -1, \"7/3\"]").unwrap(), ["10", "-1", "7/3"]);
        assert_eq!(file_tokens("# spectrum\n10\n-1\n\n-2,-3\n").unwrap(), ["10", "-1", "-2", "-3"]);
        assert!(file_tokens("[]").is_err());
        assert!(file_tokens("{\"a\": 1}").is_err());
        assert!(file_tokens("\n\n").is_err());
        assert!(file_tokens("[true]").is_err());
    }

    #[test]
    fn spectrum_parse_errors_are_usage_errors() {
        let bad = parse_spectrum(&["1".into(), "x".into()]).unwrap_err();
        assert_eq!(bad.exit_code(), 1);
        let inf = parse_spectrum(&["inf".into()]).unwrap_err();
        assert_eq!(inf.exit_code(), 1);
    }

    #[test]
    fn matrix_rows_from_object() {
        let rows = matrix_token_rows("{\"method\": \"companion\", \"matrix\": [[0, 1], [\"1/2\", 0]]}").unwrap();
        assert_eq!(rows, vec![vec!["0", "1"], vec!["1/2", "0"]]);
        assert_eq!(matrix_token_rows("1,2\n3,4\n").unwrap()[1], vec!["3", "4"]);
        assert!(matrix_token_rows("{\"m\": 1}").is_err());
    }
}

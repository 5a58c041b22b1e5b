//! Value ingestion: one decimal per line, or one column of a CSV file with
//! a header row. Lines starting with `#` are comments in both formats.

use std::fs;
use std::path::Path;

use crate::error::CliError;

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Reads values from `path`; `column` selects a CSV column by header name
/// or 0-based index.
pub fn read_values(path: &Path, column: Option<&str>) -> Result<Vec<f64>, CliError> {
    let text = read_to_string(path)?;
    match column {
        None => parse_lines(path, &text),
        Some(c) => parse_csv(path, &text, c),
    }
}

fn parse_value(path: &Path, line: usize, s: &str) -> Result<f64, CliError> {
    let err = |msg: String| CliError::Parse { path: path.to_owned(), line, msg };
    let v: f64 = s.parse().map_err(|_| err(format!("not a number: {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(format!("not a finite value: {s:?}")))
    }
}

fn parse_lines(path: &Path, text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        out.push(parse_value(path, i + 1, s)?);
    }
    Ok(out)
}

fn parse_csv(path: &Path, text: &str, column: &str) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let parse_err = |line: usize, msg: String| CliError::Parse { path: path.to_owned(), line, msg };
    let headers = rdr.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let idx = match headers.iter().position(|h| h == column) {
        Some(i) => i,
        None => column
            .parse::<usize>()
            .ok()
            .filter(|&i| i < headers.len())
            .ok_or_else(|| CliError::Usage(format!("{}: no column {column:?}", path.display())))?,
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = rec.get(idx).ok_or_else(|| parse_err(line, format!("missing column {idx}")))?;
        out.push(parse_value(path, line, field)?);
    }
    Ok(out)
}

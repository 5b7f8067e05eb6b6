//! Dense matrix text formats: MatrixMarket `array real general` and CSV.
//!
//! Decimal input is converted with correct rounding and output uses the
//! shortest representation that reads back to the same value, so a write
//! followed by a parse reproduces every entry bit for bit.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// `%%MatrixMarket matrix array real general`, values in column-major
    /// order.
    MatrixMarket,
    /// One row per line, comma-separated.
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mtx" | "mtx-dense-array" | "matrixmarket" => Ok(Format::MatrixMarket),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown matrix format `{other}`")),
        }
    }
}

impl Format {
    /// Guesses the format from a file extension; CSV unless `.mtx`.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("mtx") => Format::MatrixMarket,
            _ => Format::Csv,
        }
    }
}

pub fn parse_matrix(text: &str, format: Format) -> Result<DenseMatrix> {
    match format {
        Format::MatrixMarket => parse_matrix_market(text),
        Format::Csv => parse_csv(text),
    }
}

pub fn write_matrix(a: &DenseMatrix, format: Format) -> String {
    match format {
        Format::MatrixMarket => write_matrix_market(a),
        Format::Csv => write_csv(a),
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of a line with their 1-based starting columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |t| {
        let offset = t.as_ptr() as usize - line.as_ptr() as usize;
        (line[..offset].chars().count() + 1, t)
    })
}

fn parse_value(token: &str, line: usize, column: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| parse_error(line, column, format!("invalid number `{token}`")))
}

fn parse_dim(token: &str, line: usize, column: usize) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_error(line, column, format!("invalid dimension `{token}`")))
}

pub fn parse_matrix_market(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, 1, "empty input"))?;
    let words: Vec<String> = header
        .split_whitespace()
        .map(|w| w.to_ascii_lowercase())
        .collect();
    if words != ["%%matrixmarket", "matrix", "array", "real", "general"] {
        return Err(parse_error(
            1,
            1,
            "expected `%%MatrixMarket matrix array real general`",
        ));
    }

    let mut size: Option<(usize, usize)> = None;
    let mut values: Vec<(f64, usize, usize)> = Vec::new();
    for (no, line) in lines {
        let trimmed = line.trim_start();
        if trimmed.starts_with('%') || trimmed.is_empty() {
            continue;
        }
        if size.is_none() {
            let toks: Vec<(usize, &str)> = tokens(line).collect();
            if toks.len() != 2 {
                return Err(parse_error(no, toks[0].0, "expected `rows cols`"));
            }
            let m = parse_dim(toks[0].1, no, toks[0].0)?;
            let n = parse_dim(toks[1].1, no, toks[1].0)?;
            if m < 2 || n < 2 {
                return Err(Error::Shape { rows: m, cols: n });
            }
            size = Some((m, n));
            continue;
        }
        for (col, tok) in tokens(line) {
            values.push((parse_value(tok, no, col)?, no, col));
        }
    }
    let (m, n) = size.ok_or_else(|| parse_error(text.lines().count().max(1), 1, "missing size line"))?;
    if values.len() != m * n {
        let (line, column) = values.get(m * n).map_or((text.lines().count(), 1), |v| (v.1, v.2));
        return Err(parse_error(
            line,
            column,
            format!("expected {} values, found {}", m * n, values.len()),
        ));
    }
    let mut data = vec![0.0; m * n];
    for (k, &(x, _, _)) in values.iter().enumerate() {
        let (i, j) = (k % m, k / m);
        data[i * n + j] = x;
    }
    DenseMatrix::new(m, n, data)
}

pub fn parse_csv(text: &str) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let no = k + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut column = 1;
        for field in line.split(',') {
            let lead = field.len() - field.trim_start().len();
            row.push(parse_value(field.trim(), no, column + lead)?);
            column += field.chars().count() + 1;
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_error(
                    no,
                    1,
                    format!("expected {} fields, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if m < 2 || n < 2 {
        return Err(Error::Shape { rows: m, cols: n });
    }
    DenseMatrix::new(m, n, rows.concat())
}

pub fn write_csv(a: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        for (j, x) in a.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{x}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix_market(a: &DenseMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    writeln!(out, "{} {}", a.rows(), a.cols()).expect("writing to a String");
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            writeln!(out, "{}", a.get(i, j)).expect("writing to a String");
        }
    }
    out
}

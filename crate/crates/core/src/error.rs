use thiserror::Error;

/// Errors raised by the approximation routines.
///
/// Row, column and entry indices carried by the variants are 0-based; the
/// `Display` output converts them to 1-based for users.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector is not alternance-free: entries {} and {} both attain the maximum absolute value", .first + 1, .second + 1)]
    AlternanceTie { first: usize, second: usize },

    #[error("matrix does not preserve Chebyshev systems ({} offending rows, {} offending columns)", .rows.len(), .cols.len())]
    NotPc { rows: Vec<usize>, cols: Vec<usize> },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector has a zero or non-finite component at position {}", .index + 1)]
    NotChebyshev { index: usize },

    #[error("matrix shape {rows}x{cols} is not supported: both sizes must be at least 2")]
    Shape { rows: usize, cols: usize },

    #[error("entry ({}, {}) is not finite", .row + 1, .col + 1)]
    NonFinite { row: usize, col: usize },

    #[error("data length {got} does not match {rows}x{cols}")]
    DataLength { rows: usize, cols: usize, got: usize },

    #[error("problem size {n} exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("alternating minimization did not converge; last error {value}")]
    NotConverged { value: f64 },

    #[error("sign pattern has {got} variables, the DNF has {expected}")]
    VariableMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

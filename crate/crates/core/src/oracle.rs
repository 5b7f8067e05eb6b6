//! Brute-force references for small inputs: the exhaustive sign-class
//! minimum and a grid search for the scalar problem.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::altmin::{AltMin, AltMinOptions};
use crate::error::{Error, Result};
use crate::matcore::{ChebyshevVector, DenseMatrix, SignVector};

/// Largest column count accepted by [`exhaustive_optimize`].
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub error: f64,
    pub best_pattern: SignVector,
    /// Limit error of the run started from each pattern with first
    /// component `+1`.
    pub per_class_errors: BTreeMap<SignVector, f64>,
}

/// Runs alternating minimization from every sign pattern (up to global
/// negation) and keeps the smallest limit error.
pub fn exhaustive_optimize(a: &DenseMatrix, opts: &AltMinOptions) -> Result<OracleResult> {
    let n = a.cols();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let engine = AltMin::new(a)?;
    let patterns: Vec<SignVector> = (0..1u64 << (n - 1))
        .map(|m| SignVector::from_mask(m << 1, n))
        .collect();
    let errors: Vec<f64> = patterns
        .par_iter()
        .map(|t| {
            engine
                .iterate(&ChebyshevVector::from(t), opts)
                .map(|r| r.limit_error)
        })
        .collect::<Result<_>>()?;
    let (best, &error) = errors
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("at least one pattern");
    Ok(OracleResult {
        error,
        best_pattern: patterns[best].clone(),
        per_class_errors: patterns.into_iter().zip(errors).collect(),
    })
}

/// Scalar minimizer of `||a - t v||_inf` over `[lo, hi]` by a uniform grid of
/// about `points` samples followed by golden-section refinement of the best
/// bracket down to width `1e-12 * max(1, |t|)`.
pub fn mu_grid(a: &[f64], v: &ChebyshevVector, lo: f64, hi: f64, points: usize) -> Result<f64> {
    let vs = v.as_slice();
    if a.len() != vs.len() {
        return Err(Error::DimensionMismatch {
            expected: vs.len(),
            got: a.len(),
        });
    }
    let f = |t: f64| {
        a.iter()
            .zip(vs)
            .fold(0.0f64, |acc, (x, y)| acc.max((x - t * y).abs()))
    };
    let points = points.max(2);
    let step = (hi - lo) / (points - 1) as f64;
    let (mut best_k, mut best_f) = (0usize, f64::INFINITY);
    for k in 0..points {
        let val = f(lo + k as f64 * step);
        if val < best_f {
            best_f = val;
            best_k = k;
        }
    }
    // The objective is convex, so the minimizer lies within one step of the
    // best grid point.
    let mut x0 = lo + best_k.saturating_sub(1) as f64 * step;
    let mut x3 = lo + (best_k + 1).min(points - 1) as f64 * step;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = x3 - g * (x3 - x0);
    let mut x2 = x0 + g * (x3 - x0);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while x3 - x0 > 1e-12 * x0.abs().max(x3.abs()).max(1.0) {
        if f1 <= f2 {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - g * (x3 - x0);
            f1 = f(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + g * (x3 - x0);
            f2 = f(x2);
        }
    }
    Ok(0.5 * (x0 + x3))
}

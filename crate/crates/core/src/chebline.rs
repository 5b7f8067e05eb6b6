//! Scalar Chebyshev fitting: the unique `t` minimizing `||a - t v||_inf`
//! for a vector `v` without zero components.
//!
//! Writing `c_k = a_k / v_k` and `w_k = |v_k|`, the objective becomes the
//! weighted one-center problem `max_k w_k |t - c_k|` on the real line. Its
//! optimal value `e*` is the root of the convex, strictly decreasing,
//! piecewise-linear function
//!
//! ```text
//! H(e) = max_k (c_k - e / w_k) - min_k (c_k + e / w_k)
//! ```
//!
//! which [`mu`] finds with Newton steps started from `e = 0`. Each step costs
//! one pass over the data and the iterates increase monotonically onto the
//! root, so only a handful of passes are needed in practice.

use crate::error::{Error, Result};
use crate::matcore::{chi, delta, inf_norm, ChebyshevVector};

/// Zero-residual threshold, relative to `max(1, ||a||_inf)`.
const ZERO_RESIDUAL: f64 = 1e-15;

/// Minimizer of `||a - t v||_inf` with its optimal error and the pair of
/// indices certifying optimality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuSolution {
    pub value: f64,
    pub error: f64,
    /// Distinct indices attaining the error with opposite weighted signs
    /// `sign(v_k (a_k - t v_k))`; `(0, 1)` when the residual vanishes.
    pub witness: (usize, usize),
}

fn check_dims(a: &[f64], v: &[f64]) -> Result<()> {
    if a.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: a.len(),
        });
    }
    Ok(())
}

/// Solves the scalar problem for `a` against the Chebyshev vector `v`.
pub fn mu(a: &[f64], v: &ChebyshevVector) -> Result<MuSolution> {
    check_dims(a, v.as_slice())?;
    Ok(mu_unchecked(a, v.as_slice()))
}

/// [`mu`] without validation. `v` must have nonzero entries and the same
/// length as `a`; the alternating minimization hot loop calls this directly.
pub(crate) fn mu_unchecked(a: &[f64], v: &[f64]) -> MuSolution {
    debug_assert_eq!(a.len(), v.len());
    let scale = inf_norm(a).max(1.0);

    let mut e = 0.0f64;
    let (mut lo_idx, mut hi_idx) = extremes(a, v, e);
    // Newton on H converges finitely; the cap only guards against
    // rounding-induced cycling.
    for _ in 0..a.len() + 8 {
        let (ci, wi) = (a[lo_idx] / v[lo_idx], v[lo_idx].abs());
        let (cj, wj) = (a[hi_idx] / v[hi_idx], v[hi_idx].abs());
        let next = (ci - cj) / (1.0 / wi + 1.0 / wj);
        if next <= e {
            break;
        }
        e = next;
        let (i, j) = extremes(a, v, e);
        if (i, j) == (lo_idx, hi_idx) {
            break;
        }
        let lo = a[i] / v[i] - e / v[i].abs();
        let hi = a[j] / v[j] + e / v[j].abs();
        if lo <= hi {
            // e is already feasible, so it is the root; keep the pair that
            // produced it.
            break;
        }
        lo_idx = i;
        hi_idx = j;
    }

    let (ci, wi) = (a[lo_idx] / v[lo_idx], v[lo_idx].abs());
    let (cj, wj) = (a[hi_idx] / v[hi_idx], v[hi_idx].abs());
    let t = if lo_idx == hi_idx {
        ci
    } else {
        (wi * ci + wj * cj) / (wi + wj)
    };
    let error = a
        .iter()
        .zip(v)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - t * y).abs()));

    let witness = if error < ZERO_RESIDUAL * scale || lo_idx == hi_idx {
        (0, 1)
    } else {
        (lo_idx, hi_idx)
    };
    MuSolution {
        value: t,
        error,
        witness,
    }
}

/// `(argmax_k c_k - e/w_k, argmin_k c_k + e/w_k)`.
#[inline]
fn extremes(a: &[f64], v: &[f64], e: f64) -> (usize, usize) {
    let mut lo_idx = 0;
    let mut hi_idx = 0;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (k, (x, y)) in a.iter().zip(v).enumerate() {
        let c = x / y;
        let r = e / y.abs();
        if c - r > lo {
            lo = c - r;
            lo_idx = k;
        }
        if c + r < hi {
            hi = c + r;
            hi_idx = k;
        }
    }
    (lo_idx, hi_idx)
}

/// Exact solution by enumerating every pairwise crossing point
/// `(w_i c_i + w_j c_j) / (w_i + w_j)` and every `c_i`. Quadratic in the
/// length; kept as an independent route for cross-checking [`mu`].
pub fn mu_by_candidates(a: &[f64], v: &ChebyshevVector) -> Result<f64> {
    let v = v.as_slice();
    check_dims(a, v)?;
    let objective = |t: f64| {
        a.iter()
            .zip(v)
            .fold(0.0f64, |acc, (x, y)| acc.max((x - t * y).abs()))
    };
    let c: Vec<f64> = a.iter().zip(v).map(|(x, y)| x / y).collect();
    let w: Vec<f64> = v.iter().map(|y| y.abs()).collect();
    let mut best = (f64::INFINITY, 0.0);
    let mut consider = |t: f64| {
        let f = objective(t);
        if f < best.0 {
            best = (f, t);
        }
    };
    for i in 0..c.len() {
        consider(c[i]);
        for j in i + 1..c.len() {
            consider((w[i] * c[i] + w[j] * c[j]) / (w[i] + w[j]));
        }
    }
    Ok(best.1)
}

/// Checks the two-index optimality characterization for a candidate `t`:
/// two entries attain the maximal deviation (within `tol * max(1, ||a||)`)
/// with opposite weighted signs. A vanishing residual passes.
pub fn verify_mu(a: &[f64], v: &ChebyshevVector, t: f64, tol: f64) -> Result<bool> {
    let v = v.as_slice();
    check_dims(a, v)?;
    let slack = tol * inf_norm(a).max(1.0);
    let dev: Vec<f64> = a.iter().zip(v).map(|(x, y)| x - t * y).collect();
    let err = inf_norm(&dev);
    if err <= slack {
        return Ok(true);
    }
    let mut plus = false;
    let mut minus = false;
    for (d, y) in dev.iter().zip(v) {
        if d.abs() >= err - slack {
            if d * y > 0.0 {
                plus = true;
            } else if d * y < 0.0 {
                minus = true;
            }
        }
    }
    Ok(plus && minus)
}

/// Checks `delta(a) / (2 ||v||) <= |t| <= 2 ||a|| / ||v||` and
/// `sign(t) = sign(a_chi v_chi)` for an alternance-free `a`.
pub fn mu_bounds_check(a: &[f64], v: &ChebyshevVector, t: f64) -> Result<bool> {
    let vs = v.as_slice();
    check_dims(a, vs)?;
    let top = chi(a)?;
    let gap = delta(a)?;
    let vn = v.inf_norm();
    let lower = gap / (2.0 * vn);
    let upper = 2.0 * inf_norm(a) / vn;
    let expected_sign = (a[top] * vs[top]).signum();
    Ok(lower <= t.abs() && t.abs() <= upper && t.signum() == expected_sign)
}

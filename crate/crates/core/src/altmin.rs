//! Alternating minimization for the rank-1 Chebyshev problem.
//!
//! Starting from a Chebyshev vector `v0`, each sweep computes
//! `u = phi(A, v)` (row-wise scalar fits against `v`) and then
//! `v = psi(A, u)` (column-wise fits against `u`). For matrices whose rows
//! and columns are all alternance-free both maps keep every component
//! nonzero, the half-step errors never increase, and the limit error depends
//! only on the signs of `v0`.
//!
//! `v` is rescaled to unit max-norm after every sweep; the product `u v^T`
//! and therefore every error is unaffected.

use crate::chebline::mu_unchecked;
use crate::error::{Error, Result};
use crate::matcore::{inf_norm, profile, ChebyshevVector, DenseMatrix, MatrixProfile, SignVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltMinOptions {
    pub max_iter: usize,
    /// Stop once a full sweep lowers the error by less than
    /// `conv_tol * max(1, ||A||_C)` and the signs of `v` are unchanged.
    pub conv_tol: f64,
}

impl Default for AltMinOptions {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            conv_tol: 1e-12,
        }
    }
}

/// Per-sweep quantities bounded by the monotonicity and amplitude lemmas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepTrace {
    /// `||u^(k)||_inf ||v^(k-1)||_inf`
    pub product_before: f64,
    /// `||u^(k)||_inf ||v^(k)||_inf`
    pub product_after: f64,
    pub amplitude_u: f64,
    pub amplitude_v: f64,
}

/// Trajectory of one alternating minimization run.
#[derive(Debug, Clone)]
pub struct AltMinRun {
    /// `phi(A, v)` for the final `v`, so `||A - u v^T||_C == limit_error`.
    pub u: ChebyshevVector,
    /// Final `v`, scaled to unit max-norm.
    pub v: ChebyshevVector,
    /// Half-step errors `||A - u^(1) v^(0)T||, ||A - u^(1) v^(1)T||, ...`,
    /// ending with the error of the returned pair.
    pub errors: Vec<f64>,
    /// Completed sweeps.
    pub iterations: usize,
    /// Signs of `v^(1), v^(2), ...`.
    pub sign_trajectory: Vec<SignVector>,
    pub stabilized_signs: SignVector,
    pub limit_error: f64,
    pub converged: bool,
    pub trace: Vec<SweepTrace>,
}

/// A PC matrix bundled with its transpose so both half-steps read
/// contiguous rows.
#[derive(Debug, Clone)]
pub struct AltMin {
    a: DenseMatrix,
    at: DenseMatrix,
    profile: MatrixProfile,
}

impl AltMin {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let profile = profile(a)?;
        Ok(Self {
            a: a.clone(),
            at: a.transpose(),
            profile,
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn profile(&self) -> &MatrixProfile {
        &self.profile
    }

    /// Row-wise fit: returns `phi(A, v)` and `||A - phi(A, v) v^T||_C`.
    pub fn phi(&self, v: &ChebyshevVector) -> Result<(ChebyshevVector, f64)> {
        check_len(v, self.a.cols())?;
        let (u, err) = half_step(&self.a, v.as_slice());
        Ok((ChebyshevVector::new(u)?, err))
    }

    /// Column-wise fit: returns `psi(A, u)` and `||A - u psi(A, u)^T||_C`.
    pub fn psi(&self, u: &ChebyshevVector) -> Result<(ChebyshevVector, f64)> {
        check_len(u, self.a.rows())?;
        let (v, err) = half_step(&self.at, u.as_slice());
        Ok((ChebyshevVector::new(v)?, err))
    }

    pub fn iterate(&self, v0: &ChebyshevVector, opts: &AltMinOptions) -> Result<AltMinRun> {
        check_len(v0, self.a.cols())?;
        let scale = self.profile.cheb_norm.max(1.0);
        let mut v = v0.as_slice().to_vec();
        let mut prev_signs = v0.signs();
        let mut errors = Vec::new();
        let mut trace = Vec::new();
        let mut sign_trajectory = Vec::new();
        let mut converged = false;
        let mut iterations = 0;
        while iterations < opts.max_iter {
            let v_norm_before = inf_norm(&v);
            let (mut u, err_u) = half_step(&self.a, &v);
            let (mut v_new, err_v) = half_step(&self.at, &u);
            let reference = errors.last().copied().unwrap_or(err_u);
            errors.push(err_u);
            errors.push(err_v);
            iterations += 1;

            let u_norm = inf_norm(&u);
            let s = inf_norm(&v_new);
            trace.push(SweepTrace {
                product_before: u_norm * v_norm_before,
                product_after: u_norm * s,
                amplitude_u: amplitude(&u),
                amplitude_v: amplitude(&v_new),
            });
            for x in &mut v_new {
                *x /= s;
            }
            for x in &mut u {
                *x *= s;
            }
            v = v_new;

            let signs = sign_of(&v);
            let stable = signs == prev_signs;
            sign_trajectory.push(signs.clone());
            prev_signs = signs;
            if stable && reference - err_v < opts.conv_tol * scale {
                converged = true;
                break;
            }
        }

        let (u, err) = half_step(&self.a, &v);
        errors.push(err);
        Ok(AltMinRun {
            u: ChebyshevVector::new(u)?,
            v: ChebyshevVector::new(v)?,
            errors,
            iterations,
            stabilized_signs: prev_signs,
            sign_trajectory,
            limit_error: err,
            converged,
            trace,
        })
    }

    /// Limit error of the run started at the sign vector `t`.
    ///
    /// Returns [`Error::NotConverged`] carrying the last error when the
    /// iteration budget runs out first.
    pub fn estimate_e(&self, t: &SignVector, opts: &AltMinOptions) -> Result<f64> {
        let run = self.iterate(&ChebyshevVector::from(t), opts)?;
        if run.converged {
            Ok(run.limit_error)
        } else {
            Err(Error::NotConverged {
                value: run.limit_error,
            })
        }
    }
}

fn check_len(v: &ChebyshevVector, expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

/// Fits every row of `m` against `x`; returns the coefficients and the
/// largest row error.
fn half_step(m: &DenseMatrix, x: &[f64]) -> (Vec<f64>, f64) {
    let mut out = Vec::with_capacity(m.rows());
    let mut err = 0.0f64;
    for i in 0..m.rows() {
        let s = mu_unchecked(m.row(i), x);
        out.push(s.value);
        err = err.max(s.error);
    }
    (out, err)
}

fn amplitude(x: &[f64]) -> f64 {
    let min = x.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
    inf_norm(x) / min
}

fn sign_of(x: &[f64]) -> SignVector {
    SignVector::new(x.iter().map(|&y| if y > 0.0 { 1 } else { -1 }).collect())
        .expect("signs are +-1")
}

pub fn phi(a: &DenseMatrix, v: &ChebyshevVector) -> Result<ChebyshevVector> {
    Ok(AltMin::new(a)?.phi(v)?.0)
}

pub fn psi(a: &DenseMatrix, u: &ChebyshevVector) -> Result<ChebyshevVector> {
    Ok(AltMin::new(a)?.psi(u)?.0)
}

pub fn iterate(a: &DenseMatrix, v0: &ChebyshevVector, opts: &AltMinOptions) -> Result<AltMinRun> {
    AltMin::new(a)?.iterate(v0, opts)
}

pub fn estimate_e(a: &DenseMatrix, t: &SignVector, opts: &AltMinOptions) -> Result<f64> {
    AltMin::new(a)?.estimate_e(t, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(x: &[f64]) -> ChebyshevVector {
        ChebyshevVector::new(x.to_vec()).unwrap()
    }

    fn small() -> DenseMatrix {
        DenseMatrix::from_rows(&[[3.0, 2.0], [1.0, 0.5]]).unwrap()
    }

    fn close(x: &[f64], y: &[f64], tol: f64) -> bool {
        x.len() == y.len() && x.iter().zip(y).all(|(a, b)| (a - b).abs() <= tol)
    }

    #[test]
    fn phi_examples() {
        let u = phi(&small(), &cv(&[1.0, 1.0])).unwrap();
        assert!(close(u.as_slice(), &[2.5, 0.75], 1e-14));
        let u = phi(&DenseMatrix::identity(2).unwrap(), &cv(&[1.0, 1.0])).unwrap();
        assert!(close(u.as_slice(), &[0.5, 0.5], 1e-14));
        let u = phi(&small(), &cv(&[2.0, 2.0])).unwrap();
        assert!(close(u.as_slice(), &[1.25, 0.375], 1e-14));
    }

    #[test]
    fn psi_examples() {
        let v = psi(&DenseMatrix::identity(2).unwrap(), &cv(&[0.5, 0.5])).unwrap();
        assert!(close(v.as_slice(), &[1.0, 1.0], 1e-14));
        let v = psi(&small(), &cv(&[2.5, 0.75])).unwrap();
        assert!((v.as_slice()[0] - 16.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn psi_is_phi_of_transpose() {
        let a = DenseMatrix::from_rows(&[[0.3, -1.2, 2.2], [1.1, 0.4, -0.7]]).unwrap();
        let u = cv(&[0.8, -1.3]);
        assert_eq!(psi(&a, &u).unwrap(), phi(&a.transpose(), &u).unwrap());
    }

    #[test]
    fn identity_fixed_points() {
        let a = DenseMatrix::identity(2).unwrap();
        let opts = AltMinOptions::default();
        let run = iterate(&a, &cv(&[1.0, 1.0]), &opts).unwrap();
        assert!(run.converged);
        assert_eq!(run.iterations, 1);
        assert_eq!(run.limit_error, 0.5);
        assert!(close(run.u.as_slice(), &[0.5, 0.5], 0.0));
        assert!(close(run.v.as_slice(), &[1.0, 1.0], 0.0));

        let run = iterate(&a, &cv(&[1.0, -1.0]), &opts).unwrap();
        assert_eq!(run.limit_error, 0.5);
        assert!(close(run.u.as_slice(), &[0.5, -0.5], 0.0));
        assert!(close(run.v.as_slice(), &[1.0, -1.0], 0.0));
    }

    #[test]
    fn same_signs_same_limit() {
        let opts = AltMinOptions::default();
        let e1 = iterate(&small(), &cv(&[1.0, 1.0]), &opts).unwrap().limit_error;
        let e2 = iterate(&small(), &cv(&[5.0, 0.1]), &opts).unwrap().limit_error;
        assert!((e1 - e2).abs() < 1e-10);
    }

    #[test]
    fn estimate_examples() {
        let a = DenseMatrix::identity(2).unwrap();
        let opts = AltMinOptions::default();
        let pp = SignVector::new(vec![1, 1]).unwrap();
        let pm = SignVector::new(vec![1, -1]).unwrap();
        assert_eq!(estimate_e(&a, &pp, &opts).unwrap(), 0.5);
        assert_eq!(estimate_e(&a, &pm, &opts).unwrap(), 0.5);
    }

    #[test]
    fn not_converged_carries_value() {
        let a = DenseMatrix::from_rows(&[[3.0, 2.0, -0.1], [1.0, 0.5, 0.9], [0.2, -1.7, 0.3]])
            .unwrap();
        let opts = AltMinOptions {
            max_iter: 1,
            conv_tol: 0.0,
        };
        let t = SignVector::new(vec![1, -1, 1]).unwrap();
        match estimate_e(&a, &t, &opts) {
            Err(Error::NotConverged { value }) => assert!(value > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_pc() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0], [0.0, 2.0]]).unwrap();
        assert!(matches!(AltMin::new(&a), Err(Error::NotPc { .. })));
    }

    #[test]
    fn dimension_checks() {
        let engine = AltMin::new(&small()).unwrap();
        assert!(matches!(
            engine.phi(&cv(&[1.0, 1.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

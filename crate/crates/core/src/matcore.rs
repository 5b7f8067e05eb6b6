//! Dense matrices, Chebyshev vectors, sign vectors, and the argmax maps
//! every other module consumes.
//!
//! Indices are 0-based throughout the library. Reports meant for people are
//! converted to 1-based at the output boundary.

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major `m x n` real matrix with `m, n >= 2` and finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::Shape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(m, n, data)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::new(n, n, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Row-major entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Chebyshev norm: the largest absolute entry.
    pub fn cheb_norm(&self) -> f64 {
        inf_norm(&self.data)
    }

    /// `||A - u v^T||_C`.
    pub fn residual_norm(&self, u: &[f64], v: &[f64]) -> f64 {
        assert_eq!(u.len(), self.rows);
        assert_eq!(v.len(), self.cols);
        let mut worst = 0.0f64;
        for (i, &ui) in u.iter().enumerate() {
            for (a, &vj) in self.row(i).iter().zip(v) {
                worst = worst.max((a - ui * vj).abs());
            }
        }
        worst
    }
}

/// `max_i |x_i|`, zero for an empty slice.
pub fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// A real vector whose components are all finite and nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevVector(Vec<f64>);

impl ChebyshevVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|x| *x == 0.0 || !x.is_finite()) {
            return Err(Error::NotChebyshev { index });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inf_norm(&self) -> f64 {
        inf_norm(&self.0)
    }

    /// `||v||_inf / min_i |v_i|`, always at least 1.
    pub fn amplitude(&self) -> f64 {
        let min = self.0.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
        self.inf_norm() / min
    }

    pub fn signs(&self) -> SignVector {
        SignVector(self.0.iter().map(|&x| if x > 0.0 { 1 } else { -1 }).collect())
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }
}

impl AsRef<[f64]> for ChebyshevVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl From<&SignVector> for ChebyshevVector {
    fn from(t: &SignVector) -> Self {
        ChebyshevVector(t.to_f64())
    }
}

/// Element of `{-1, +1}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(index) = signs.iter().position(|s| *s != 1 && *s != -1) {
            return Err(Error::NotChebyshev { index });
        }
        Ok(Self(signs))
    }

    pub fn all_positive(len: usize) -> Self {
        Self(vec![1; len])
    }

    /// Bit `j` set means component `j` is negative.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len <= 64);
        Self((0..len).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.0.len() <= 64);
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s < 0)
            .fold(0u64, |m, (j, _)| m | 1 << j)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> i8 {
        self.0[j]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&s| f64::from(s)).collect()
    }

    /// Restriction to the listed positions, in the listed order.
    pub fn restrict(&self, positions: &[usize]) -> SignVector {
        SignVector(positions.iter().map(|&j| self.0[j]).collect())
    }
}

impl Neg for &SignVector {
    type Output = SignVector;

    fn neg(self) -> SignVector {
        SignVector(self.0.iter().map(|s| -s).collect())
    }
}

impl Neg for SignVector {
    type Output = SignVector;

    fn neg(self) -> SignVector {
        -&self
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Vec<i8> {
        s.0
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Index of the largest absolute value, rejecting exact ties.
pub fn chi(a: &[f64]) -> Result<usize> {
    top_two(a).map(|(first, _)| first)
}

/// Gap between the largest and the second largest absolute value.
pub fn delta(a: &[f64]) -> Result<f64> {
    let (first, second) = top_two(a)?;
    Ok(a[first].abs() - a[second].abs())
}

pub fn is_alternance_free(a: &[f64]) -> bool {
    is_alternance_free_with_tol(a, 0.0)
}

/// With `tol > 0`, a second absolute value within `tol * ||a||_inf` of the
/// maximum also counts as a tie.
pub fn is_alternance_free_with_tol(a: &[f64], tol: f64) -> bool {
    match top_two(a) {
        Ok((first, second)) => {
            let top = a[first].abs();
            a[second].abs() < top - tol * top
        }
        Err(_) => false,
    }
}

/// Indices of the largest and second largest absolute values (first
/// occurrence wins), or a tie error.
fn top_two(a: &[f64]) -> Result<(usize, usize)> {
    if a.len() < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: a.len(),
        });
    }
    let (mut first, mut second) = if a[1].abs() > a[0].abs() {
        (1, 0)
    } else {
        (0, 1)
    };
    for (j, x) in a.iter().enumerate().skip(2) {
        let x = x.abs();
        if x > a[first].abs() {
            second = first;
            first = j;
        } else if x > a[second].abs() {
            second = j;
        }
    }
    if a[first].abs() == a[second].abs() {
        let (lo, hi) = (first.min(second), first.max(second));
        return Err(Error::AlternanceTie {
            first: lo,
            second: hi,
        });
    }
    Ok((first, second))
}

/// Outcome of the alternance-free check on every row and column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PcReport {
    pub preserves: bool,
    /// Offending rows, 0-based.
    pub bad_rows: Vec<usize>,
    /// Offending columns, 0-based.
    pub bad_cols: Vec<usize>,
}

pub fn preserves_chebyshev(a: &DenseMatrix) -> PcReport {
    preserves_chebyshev_with_tol(a, 0.0)
}

pub fn preserves_chebyshev_with_tol(a: &DenseMatrix, tol: f64) -> PcReport {
    let bad_rows: Vec<usize> = (0..a.rows())
        .filter(|&i| !is_alternance_free_with_tol(a.row(i), tol))
        .collect();
    let bad_cols: Vec<usize> = (0..a.cols())
        .filter(|&j| !is_alternance_free_with_tol(&a.col(j), tol))
        .collect();
    PcReport {
        preserves: bad_rows.is_empty() && bad_cols.is_empty(),
        bad_rows,
        bad_cols,
    }
}

/// Row and column argmax maps of a PC matrix, the gaps `delta_r`,
/// `delta_c`, and the signs of the entries at the argmax positions.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProfile {
    /// `row_argmax[i]`: column of the largest entry of row `i`.
    pub row_argmax: Vec<usize>,
    /// `col_argmax[j]`: row of the largest entry of column `j`.
    pub col_argmax: Vec<usize>,
    pub delta_row: f64,
    pub delta_col: f64,
    pub cheb_norm: f64,
    /// Sign of `a[i, row_argmax[i]]`.
    pub row_max_sign: Vec<i8>,
    /// Sign of `a[col_argmax[j], j]`.
    pub col_max_sign: Vec<i8>,
}

impl MatrixProfile {
    pub fn rows(&self) -> usize {
        self.row_argmax.len()
    }

    pub fn cols(&self) -> usize {
        self.col_argmax.len()
    }

    /// `j -> row_argmax[col_argmax[j]]`, the in-edge source of `j` in the
    /// sign dependency graph.
    pub fn parent(&self, j: usize) -> usize {
        self.row_argmax[self.col_argmax[j]]
    }
}

pub fn profile(a: &DenseMatrix) -> Result<MatrixProfile> {
    let report = preserves_chebyshev(a);
    if !report.preserves {
        return Err(Error::NotPc {
            rows: report.bad_rows,
            cols: report.bad_cols,
        });
    }
    let sign = |x: f64| if x > 0.0 { 1i8 } else { -1 };
    let mut row_argmax = Vec::with_capacity(a.rows());
    let mut row_max_sign = Vec::with_capacity(a.rows());
    let mut delta_row = f64::INFINITY;
    for i in 0..a.rows() {
        let r = a.row(i);
        let j = chi(r)?;
        row_argmax.push(j);
        row_max_sign.push(sign(r[j]));
        delta_row = delta_row.min(delta(r)?);
    }
    let mut col_argmax = Vec::with_capacity(a.cols());
    let mut col_max_sign = Vec::with_capacity(a.cols());
    let mut delta_col = f64::INFINITY;
    for j in 0..a.cols() {
        let c = a.col(j);
        let i = chi(&c)?;
        col_argmax.push(i);
        col_max_sign.push(sign(c[i]));
        delta_col = delta_col.min(delta(&c)?);
    }
    Ok(MatrixProfile {
        row_argmax,
        col_argmax,
        delta_row,
        delta_col,
        cheb_norm: a.cheb_norm(),
        row_max_sign,
        col_max_sign,
    })
}

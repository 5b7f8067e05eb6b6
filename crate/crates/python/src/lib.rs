//! Python bindings. Indices are 0-based, as usual in Python; the JSON
//! produced by `OptResult.to_json` keeps the 1-based convention of the
//! command-line tool.

use std::collections::BTreeMap;

use ::chebrank as core;
use core::alternance::{find_alternance as find_cycle, residual_support, DEFAULT_TOLERANCE_LADDER};
use core::altmin::{AltMin, AltMinOptions, AltMinRun as CoreRun};
use core::globalopt::{optimize_with, OptResult as CoreResult, OptimizeOptions, Termination};
use core::io::{parse_matrix, write_matrix, Format};
use core::matcore::{preserves_chebyshev_with_tol, ChebyshevVector, DenseMatrix, SignVector};
use core::report::{to_json, OptResultJson};
use core::signgraph::build_dependency_graph;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn chebyshev(x: Vec<f64>) -> PyResult<ChebyshevVector> {
    ChebyshevVector::new(x).map_err(value_error)
}

fn sign_vector(x: Vec<i8>) -> PyResult<SignVector> {
    SignVector::new(x).map_err(value_error)
}

fn options(max_iter: usize, conv_tol: f64) -> AltMinOptions {
    AltMinOptions { max_iter, conv_tol }
}

/// Dense real matrix with at least two rows and two columns.
#[pyclass(name = "Matrix", module = "chebrank", frozen)]
struct PyMatrix {
    inner: DenseMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = DenseMatrix::from_rows(&rows).map_err(value_error)?;
        Ok(Self { inner })
    }

    /// Parses CSV (one row per line) or MatrixMarket dense array text.
    #[staticmethod]
    #[pyo3(signature = (text, format = "csv"))]
    fn parse(text: &str, format: &str) -> PyResult<Self> {
        let format: Format = format.parse().map_err(PyValueError::new_err)?;
        let inner = parse_matrix(text, format).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[pyo3(signature = (format = "csv"))]
    fn dump(&self, format: &str) -> PyResult<String> {
        let format: Format = format.parse().map_err(PyValueError::new_err)?;
        Ok(write_matrix(&self.inner, format))
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.cols())
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        (0..self.inner.rows())
            .map(|i| self.inner.row(i).to_vec())
            .collect()
    }

    fn cheb_norm(&self) -> f64 {
        self.inner.cheb_norm()
    }

    /// `max |a_ij - u_i v_j|`.
    fn residual_norm(&self, u: Vec<f64>, v: Vec<f64>) -> PyResult<f64> {
        if u.len() != self.inner.rows() || v.len() != self.inner.cols() {
            return Err(PyValueError::new_err("u and v must match the matrix shape"));
        }
        Ok(self.inner.residual_norm(&u, &v))
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.to_list())
    }
}

#[pyclass(name = "PcReport", module = "chebrank", frozen, get_all)]
struct PyPcReport {
    preserves: bool,
    bad_rows: Vec<usize>,
    bad_cols: Vec<usize>,
}

#[pymethods]
impl PyPcReport {
    fn __bool__(&self) -> bool {
        self.preserves
    }

    fn __repr__(&self) -> String {
        format!(
            "PcReport(preserves={}, bad_rows={:?}, bad_cols={:?})",
            self.preserves, self.bad_rows, self.bad_cols
        )
    }
}

/// Whether every row and column has a unique entry of largest modulus.
#[pyfunction]
#[pyo3(signature = (matrix, tie_tol = 0.0))]
fn preserves_chebyshev(matrix: &PyMatrix, tie_tol: f64) -> PyPcReport {
    let r = preserves_chebyshev_with_tol(&matrix.inner, tie_tol);
    PyPcReport {
        preserves: r.preserves,
        bad_rows: r.bad_rows,
        bad_cols: r.bad_cols,
    }
}

/// Minimizer `t` of `max |a_k - t v_k|` and the minimal value.
#[pyfunction]
fn mu(a: Vec<f64>, v: Vec<f64>) -> PyResult<(f64, f64)> {
    let s = core::chebline::mu(&a, &chebyshev(v)?).map_err(value_error)?;
    Ok((s.value, s.error))
}

#[pyclass(name = "AltMinRun", module = "chebrank", frozen, get_all)]
struct PyAltMinRun {
    u: Vec<f64>,
    v: Vec<f64>,
    errors: Vec<f64>,
    iterations: usize,
    limit_error: f64,
    converged: bool,
    stabilized_signs: Vec<i8>,
}

impl From<CoreRun> for PyAltMinRun {
    fn from(r: CoreRun) -> Self {
        Self {
            u: r.u.into_vec(),
            v: r.v.into_vec(),
            errors: r.errors,
            iterations: r.iterations,
            limit_error: r.limit_error,
            converged: r.converged,
            stabilized_signs: r.stabilized_signs.into(),
        }
    }
}

#[pymethods]
impl PyAltMinRun {
    fn __repr__(&self) -> String {
        format!(
            "AltMinRun(limit_error={}, iterations={}, converged={})",
            self.limit_error, self.iterations, self.converged
        )
    }
}

/// Alternating minimization from `v0`.
#[pyfunction]
#[pyo3(signature = (matrix, v0, max_iter = 10_000, conv_tol = 1e-12))]
fn iterate(matrix: &PyMatrix, v0: Vec<f64>, max_iter: usize, conv_tol: f64) -> PyResult<PyAltMinRun> {
    let engine = AltMin::new(&matrix.inner).map_err(value_error)?;
    let run = engine
        .iterate(&chebyshev(v0)?, &options(max_iter, conv_tol))
        .map_err(value_error)?;
    Ok(run.into())
}

/// Limit error of alternating minimization started at a `+-1` vector.
#[pyfunction]
#[pyo3(signature = (matrix, signs, max_iter = 10_000, conv_tol = 1e-12))]
fn estimate_e(matrix: &PyMatrix, signs: Vec<i8>, max_iter: usize, conv_tol: f64) -> PyResult<f64> {
    let engine = AltMin::new(&matrix.inner).map_err(value_error)?;
    engine
        .estimate_e(&sign_vector(signs)?, &options(max_iter, conv_tol))
        .map_err(value_error)
}

#[pyclass(name = "OptResult", module = "chebrank", frozen)]
struct PyOptResult {
    inner: CoreResult,
}

#[pymethods]
impl PyOptResult {
    #[getter]
    fn error(&self) -> f64 {
        self.inner.error
    }

    #[getter]
    fn u(&self) -> Vec<f64> {
        self.inner.u.as_slice().to_vec()
    }

    #[getter]
    fn v(&self) -> Vec<f64> {
        self.inner.v.as_slice().to_vec()
    }

    #[getter]
    fn runs(&self) -> usize {
        self.inner.run_count()
    }

    #[getter]
    fn loop_columns(&self) -> Vec<usize> {
        self.inner.loop_columns.clone()
    }

    /// Starting pattern of each run on the loop columns.
    #[getter]
    fn patterns(&self) -> Vec<String> {
        self.inner.runs.iter().map(|r| r.pattern.to_string()).collect()
    }

    #[getter]
    fn run_errors(&self) -> Vec<f64> {
        self.inner.runs.iter().map(|r| r.limit_error).collect()
    }

    /// `True` when every sign class was covered, so the error is optimal.
    #[getter]
    fn optimal(&self) -> bool {
        self.inner.terminated == Termination::DnfFull
    }

    #[getter]
    fn terminated(&self) -> &'static str {
        match self.inner.terminated {
            Termination::DnfFull => "dnf-full",
            Termination::RunLimit => "run-limit",
        }
    }

    fn to_json(&self) -> String {
        to_json(&OptResultJson::from(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "OptResult(error={}, runs={}, terminated={:?})",
            self.inner.error,
            self.inner.run_count(),
            self.terminated()
        )
    }
}

/// Globally optimal rank-1 approximation `u v^T`.
#[pyfunction]
#[pyo3(signature = (matrix, run_limit = None, seed = None, support_tol = None, max_iter = 10_000, conv_tol = 1e-12))]
fn optimize(
    py: Python<'_>,
    matrix: &PyMatrix,
    run_limit: Option<usize>,
    seed: Option<u64>,
    support_tol: Option<Vec<f64>>,
    max_iter: usize,
    conv_tol: f64,
) -> PyResult<PyOptResult> {
    let engine = AltMin::new(&matrix.inner).map_err(value_error)?;
    let opts = OptimizeOptions {
        altmin: options(max_iter, conv_tol),
        tol_ladder: support_tol.unwrap_or_else(|| DEFAULT_TOLERANCE_LADDER.to_vec()),
        run_limit,
        seed,
    };
    let inner = py
        .detach(|| optimize_with(&engine, &opts))
        .map_err(value_error)?;
    Ok(PyOptResult { inner })
}

/// Brute force over all sign patterns with first component `+1`; returns
/// `(error, best_pattern, {pattern: error})`.
#[pyfunction]
#[pyo3(signature = (matrix, max_iter = 10_000, conv_tol = 1e-12))]
fn exhaustive_optimize(
    py: Python<'_>,
    matrix: &PyMatrix,
    max_iter: usize,
    conv_tol: f64,
) -> PyResult<(f64, String, BTreeMap<String, f64>)> {
    let opts = options(max_iter, conv_tol);
    let r = py
        .detach(|| core::oracle::exhaustive_optimize(&matrix.inner, &opts))
        .map_err(value_error)?;
    let per_class = r
        .per_class_errors
        .iter()
        .map(|(k, &v)| (k.to_string(), v))
        .collect();
    Ok((r.error, r.best_pattern.to_string(), per_class))
}

#[pyclass(name = "DependencyGraph", module = "chebrank", frozen, get_all)]
struct PyDependencyGraph {
    parent: Vec<usize>,
    loops: Vec<usize>,
    depth: usize,
    reach: Vec<usize>,
}

#[pymethods]
impl PyDependencyGraph {
    fn __repr__(&self) -> String {
        format!("DependencyGraph(loops={:?}, depth={})", self.loops, self.depth)
    }
}

/// Sign dependency graph: `parent[j]` determines the next sign of column
/// `j`; `loops` are the fixed columns.
#[pyfunction]
fn dependency_graph(matrix: &PyMatrix) -> PyResult<PyDependencyGraph> {
    let p = core::matcore::profile(&matrix.inner).map_err(value_error)?;
    let g = build_dependency_graph(&p);
    Ok(PyDependencyGraph {
        parent: g.parent,
        loops: g.loops,
        depth: g.depth,
        reach: g.reach,
    })
}

/// Shortest two-dimensional alternance of `(A, u, v)` as a list of
/// `(row, column)` entries, or `None`.
#[pyfunction]
#[pyo3(signature = (matrix, u, v, tol = 1e-7))]
fn find_alternance(
    matrix: &PyMatrix,
    u: Vec<f64>,
    v: Vec<f64>,
    tol: f64,
) -> PyResult<Option<Vec<(usize, usize)>>> {
    let (u, v) = (chebyshev(u)?, chebyshev(v)?);
    if u.len() != matrix.inner.rows() || v.len() != matrix.inner.cols() {
        return Err(PyValueError::new_err("u and v must match the matrix shape"));
    }
    let support = residual_support(&matrix.inner, &u, &v, tol);
    Ok(find_cycle(&support).map(|c| c.cycle))
}

#[pymodule(name = "chebrank")]
fn chebrank_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyPcReport>()?;
    m.add_class::<PyAltMinRun>()?;
    m.add_class::<PyOptResult>()?;
    m.add_class::<PyDependencyGraph>()?;
    m.add_function(wrap_pyfunction!(preserves_chebyshev, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(iterate, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_e, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(dependency_graph, m)?)?;
    m.add_function(wrap_pyfunction!(find_alternance, m)?)?;
    Ok(())
}

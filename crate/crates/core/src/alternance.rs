//! Maximal-residual support and two-dimensional alternance certificates.
//!
//! A two-dimensional alternance for `(A, u, v)` is a closed sequence
//! `(i1,j1), (i1,j2), (i2,j2), ..., (ik,jk), (ik,j1)` of maximal-residual
//! entries along which `tau_ij = sign(u_i v_j (a_ij - u_i v_j))` flips at
//! every step. Its existence certifies that no pair with the same signs of
//! `v` on `{j1, ..., jk}` does better.
//!
//! The search views the support as a bipartite graph between rows and
//! columns with one edge per entry, and orients `tau = +1` entries from row
//! to column and `tau = -1` entries from column to row. Alternating closed
//! walks are then exactly the directed cycles, and a shortest one is found
//! by breadth-first search.

use std::collections::VecDeque;

use serde::Serialize;

use crate::matcore::{ChebyshevVector, DenseMatrix};

/// Support tolerances tried in order until a certificate is found.
pub const DEFAULT_TOLERANCE_LADDER: [f64; 3] = [1e-7, 1e-5, 1e-4];

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSupport {
    pub error: f64,
    /// Entries with `|a_ij - u_i v_j| >= (1 - tol) * error`, row-major order.
    pub entries: Vec<(usize, usize)>,
    /// `tau` of each entry, parallel to `entries`.
    pub tau: Vec<i8>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub tol: f64,
    shape: (usize, usize),
}

impl ResidualSupport {
    pub fn tau_of(&self, entry: (usize, usize)) -> Option<i8> {
        self.entries
            .binary_search(&entry)
            .ok()
            .map(|k| self.tau[k])
    }
}

/// Panics unless `u` and `v` match the shape of `a`.
pub fn residual_support(
    a: &DenseMatrix,
    u: &ChebyshevVector,
    v: &ChebyshevVector,
    tol: f64,
) -> ResidualSupport {
    let (u, v) = (u.as_slice(), v.as_slice());
    assert_eq!(u.len(), a.rows(), "u does not match the row count");
    assert_eq!(v.len(), a.cols(), "v does not match the column count");
    let error = a.residual_norm(u, v);
    let threshold = (1.0 - tol) * error;
    let mut entries = Vec::new();
    let mut tau = Vec::new();
    for (i, &ui) in u.iter().enumerate() {
        for (j, &vj) in v.iter().enumerate() {
            let r = a.get(i, j) - ui * vj;
            if r.abs() >= threshold {
                entries.push((i, j));
                let s = ui * vj * r;
                tau.push(if s > 0.0 {
                    1
                } else if s < 0.0 {
                    -1
                } else {
                    0
                });
            }
        }
    }
    let mut rows: Vec<usize> = entries.iter().map(|e| e.0).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut cols: Vec<usize> = entries.iter().map(|e| e.1).collect();
    cols.sort_unstable();
    cols.dedup();
    ResidualSupport {
        error,
        entries,
        tau,
        rows,
        cols,
        tol,
        shape: (a.rows(), a.cols()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlternanceCertificate {
    /// `(i1,j1), (i1,j2), (i2,j2), ..., (ik,jk), (ik,j1)`, 0-based.
    pub cycle: Vec<(usize, usize)>,
    /// `j1, ..., jk` in cycle order.
    pub columns: Vec<usize>,
    /// `i1, ..., ik` in cycle order.
    pub rows: Vec<usize>,
    pub error: f64,
    pub tol: f64,
}

impl AlternanceCertificate {
    pub fn k(&self) -> usize {
        self.columns.len()
    }
}

/// Shortest alternating cycle in the support, if any.
pub fn find_alternance(support: &ResidualSupport) -> Option<AlternanceCertificate> {
    let (m, n) = support.shape;
    // Nodes 0..m are rows, m..m+n are columns.
    let node_count = m + n;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (&(i, j), &t) in support.entries.iter().zip(&support.tau) {
        match t {
            1 => adj[i].push(m + j),
            -1 => adj[m + j].push(i),
            _ => {}
        }
    }

    let mut best: Option<Vec<usize>> = None;
    let mut dist = vec![usize::MAX; node_count];
    let mut pred = vec![usize::MAX; node_count];
    let mut queue = VecDeque::new();
    // Every cycle passes through a column node, so starting there suffices.
    for start in m..node_count {
        if adj[start].is_empty() {
            continue;
        }
        dist.fill(usize::MAX);
        queue.clear();
        dist[start] = 0;
        queue.push_back(start);
        let mut closing = None;
        'bfs: while let Some(x) = queue.pop_front() {
            if best.as_ref().is_some_and(|b| dist[x] + 1 >= b.len()) {
                break;
            }
            for &y in &adj[x] {
                if y == start {
                    closing = Some(x);
                    break 'bfs;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    pred[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if let Some(last) = closing {
            let mut path = vec![last];
            let mut cur = last;
            while cur != start {
                cur = pred[cur];
                path.push(cur);
            }
            path.reverse();
            if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                best = Some(path);
            }
        }
    }

    // path: c1, r1, c2, r2, ..., ck, rk (closing rk -> c1)
    let path = best?;
    let columns: Vec<usize> = path.iter().step_by(2).map(|&c| c - m).collect();
    let rows: Vec<usize> = path.iter().skip(1).step_by(2).copied().collect();
    let k = columns.len();
    let mut cycle = Vec::with_capacity(2 * k);
    for s in 0..k {
        cycle.push((rows[s], columns[s]));
        cycle.push((rows[s], columns[(s + 1) % k]));
    }
    Some(AlternanceCertificate {
        cycle,
        columns,
        rows,
        error: support.error,
        tol: support.tol,
    })
}

/// Walks the tolerance ladder until the support of `(A, u, v)` admits an
/// alternance.
pub fn certify(
    a: &DenseMatrix,
    u: &ChebyshevVector,
    v: &ChebyshevVector,
    ladder: &[f64],
) -> Option<AlternanceCertificate> {
    ladder
        .iter()
        .find_map(|&tol| find_alternance(&residual_support(a, u, v, tol)))
}

/// Re-checks a certificate against `(A, u, v)` at support tolerance `tol`.
pub fn verify_certificate(
    a: &DenseMatrix,
    u: &ChebyshevVector,
    v: &ChebyshevVector,
    cert: &AlternanceCertificate,
    tol: f64,
) -> bool {
    let len = cert.cycle.len();
    if len < 4 || !len.is_multiple_of(2) || u.len() != a.rows() || v.len() != a.cols() {
        return false;
    }
    let mut sorted = cert.cycle.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != len {
        return false;
    }
    // Even steps stay in a row, odd steps stay in a column.
    for s in 0..len {
        let (a0, b0) = cert.cycle[s];
        let (a1, b1) = cert.cycle[(s + 1) % len];
        let ok = if s % 2 == 0 {
            a0 == a1 && b0 != b1
        } else {
            b0 == b1 && a0 != a1
        };
        if !ok {
            return false;
        }
    }
    let support = residual_support(a, u, v, tol);
    let mut taus = Vec::with_capacity(len);
    for &e in &cert.cycle {
        match support.tau_of(e) {
            Some(t) if t != 0 => taus.push(t),
            _ => return false,
        }
    }
    (0..len).all(|s| taus[s] == -taus[(s + 1) % len])
}

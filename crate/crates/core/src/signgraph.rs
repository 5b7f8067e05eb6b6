//! Sign dynamics of alternating minimization.
//!
//! For a PC matrix the sign of every component produced by a half-step is
//! fixed by the sign of the input at the matching argmax position:
//!
//! ```text
//! sign u_i = sign a[i, J(i)] * sign v_J(i)
//! sign v_j = sign a[I(j), j] * sign u_I(j)
//! ```
//!
//! where `J` and `I` are the row and column argmax maps. Composing the two
//! gives the transition `V` on `{-1, +1}^n`, whose dependency structure is
//! the functional graph `j <- J(I(j))` on column indices (the sign
//! dependency graph). Its fixed points `F` are the loop columns.
//!
//! Full enumeration of the transition graph over all `2^n` sign vectors is
//! available for small `n` along with a checker for its structure: `2^|F|`
//! isomorphic tree components of size `2^(n - |F|)`, each with one loop
//! vertex, and depth equal to the dependency graph depth.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::{profile, DenseMatrix, MatrixProfile, SignVector};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

/// `T(t)`: signs of `phi(A, v)` for any Chebyshev `v` with signs `t`.
pub fn u_sign(profile: &MatrixProfile, t: &SignVector) -> Result<SignVector> {
    check_len(t, profile.cols())?;
    let signs = (0..profile.rows())
        .map(|i| profile.row_max_sign[i] * t.get(profile.row_argmax[i]))
        .collect();
    SignVector::new(signs)
}

/// `R(p)`: signs of `psi(A, u)` for any Chebyshev `u` with signs `p`.
pub fn v_sign(profile: &MatrixProfile, p: &SignVector) -> Result<SignVector> {
    check_len(p, profile.rows())?;
    let signs = (0..profile.cols())
        .map(|j| profile.col_max_sign[j] * p.get(profile.col_argmax[j]))
        .collect();
    SignVector::new(signs)
}

/// `V(t) = R(T(t))`, evaluated directly:
/// `V(t)_j = sign a[I(j), j] * sign a[I(j), J(I(j))] * t_J(I(j))`.
pub fn v_transition(profile: &MatrixProfile, t: &SignVector) -> Result<SignVector> {
    check_len(t, profile.cols())?;
    let signs = (0..profile.cols())
        .map(|j| flip_sign(profile, j) * t.get(profile.parent(j)))
        .collect();
    SignVector::new(signs)
}

fn flip_sign(profile: &MatrixProfile, j: usize) -> i8 {
    let i = profile.col_argmax[j];
    profile.col_max_sign[j] * profile.row_max_sign[i]
}

fn check_len(t: &SignVector, expected: usize) -> Result<()> {
    if t.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: t.len(),
        });
    }
    Ok(())
}

/// The sign dependency graph on column indices: an edge `parent[j] -> j`
/// for every `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignDependencyGraph {
    pub parent: Vec<usize>,
    /// Loop columns in ascending order.
    pub loops: Vec<usize>,
    /// Longest chain of distinct vertices along edges.
    pub depth: usize,
    /// `reach[j]`: the loop column from which `j` is reachable.
    pub reach: Vec<usize>,
}

impl SignDependencyGraph {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn is_loop(&self, j: usize) -> bool {
        self.parent[j] == j
    }

    /// Position of each loop column inside `loops`.
    pub fn loop_positions(&self) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.n()];
        for (k, &j) in self.loops.iter().enumerate() {
            pos[j] = Some(k);
        }
        pos
    }
}

pub fn build_dependency_graph(profile: &MatrixProfile) -> SignDependencyGraph {
    let n = profile.cols();
    let parent: Vec<usize> = (0..n).map(|j| profile.parent(j)).collect();
    let loops: Vec<usize> = (0..n).filter(|&j| parent[j] == j).collect();
    let mut reach = vec![0; n];
    let mut depth = 0;
    for (j, slot) in reach.iter_mut().enumerate() {
        // Chains stabilize after fewer than n steps since the graph has no
        // cycles other than loops.
        let mut cur = j;
        let mut len = 1;
        while parent[cur] != cur {
            cur = parent[cur];
            len += 1;
            assert!(len <= n, "dependency graph has a non-trivial cycle");
        }
        *slot = cur;
        depth = depth.max(len);
    }
    SignDependencyGraph {
        parent,
        loops,
        depth,
        reach,
    }
}

/// All `2^n` vertices of the sign transition graph with their successor,
/// eventual loop vertex `f(t)`, and `d(t) = t / f(t)`. Vertex `t` is stored
/// as a bitmask with bit `j` set when `t_j = -1`, so `t / f(t)` is an XOR.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    pub n: usize,
    pub next: Vec<u32>,
    pub limit: Vec<u32>,
    /// Number of edges from the vertex to its loop vertex.
    pub height: Vec<u32>,
    pub dependency: SignDependencyGraph,
    flips: u32,
}

impl TransitionGraph {
    pub fn vertex_count(&self) -> usize {
        self.next.len()
    }

    pub fn vertex(&self, mask: u32) -> SignVector {
        SignVector::from_mask(u64::from(mask), self.n)
    }

    pub fn d(&self, mask: u32) -> u32 {
        mask ^ self.limit[mask as usize]
    }

    /// Longest chain of distinct vertices.
    pub fn depth(&self) -> usize {
        self.height.iter().copied().max().unwrap_or(0) as usize + 1
    }

    fn step(&self, mask: u32) -> u32 {
        transition_mask(&self.dependency.parent, self.flips, mask)
    }

    pub fn summary(&self) -> TransitionGraphSummary {
        let mut comps: HashMap<u32, (usize, usize)> = HashMap::new();
        for (t, &f) in self.limit.iter().enumerate() {
            let e = comps.entry(f).or_insert((0, 0));
            e.0 += 1;
            e.1 = e.1.max(self.height[t] as usize + 1);
        }
        let mut components: Vec<ComponentSummary> = comps
            .into_iter()
            .map(|(f, (size, depth))| ComponentSummary {
                loop_vertex: self.vertex(f),
                loop_mask: f,
                size,
                depth,
            })
            .collect();
        components.sort_by_key(|c| c.loop_mask);
        TransitionGraphSummary {
            n: self.n,
            k: self.dependency.loops.len(),
            components,
            vertex_count: self.vertex_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSummary {
    pub loop_vertex: SignVector,
    pub loop_mask: u32,
    pub size: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraphSummary {
    pub n: usize,
    /// Number of loop columns.
    pub k: usize,
    pub components: Vec<ComponentSummary>,
    pub vertex_count: usize,
}

#[inline]
fn transition_mask(parent: &[usize], flips: u32, mask: u32) -> u32 {
    let mut out = flips;
    for (j, &p) in parent.iter().enumerate() {
        out ^= (mask >> p & 1) << j;
    }
    out
}

/// Enumerates the transition graph of `a`; refuses `n > limit`.
pub fn enumerate_transition_graph(a: &DenseMatrix, limit: usize) -> Result<TransitionGraph> {
    let limit = limit.min(31);
    if a.cols() > limit {
        return Err(Error::TooLarge {
            n: a.cols(),
            limit,
        });
    }
    let profile = profile(a)?;
    Ok(enumerate_from_profile(&profile))
}

pub fn enumerate_from_profile(profile: &MatrixProfile) -> TransitionGraph {
    let n = profile.cols();
    assert!(n <= 31);
    let dependency = build_dependency_graph(profile);
    let flips = (0..n)
        .filter(|&j| flip_sign(profile, j) < 0)
        .fold(0u32, |m, j| m | 1 << j);
    let parent = &dependency.parent;
    let count = 1usize << n;
    let next: Vec<u32> = (0..count as u32)
        .into_par_iter()
        .map(|t| transition_mask(parent, flips, t))
        .collect();
    let walk: Vec<(u32, u32)> = (0..count as u32)
        .into_par_iter()
        .map(|t| {
            let mut cur = t;
            let mut h = 0;
            while next[cur as usize] != cur {
                cur = next[cur as usize];
                h += 1;
                assert!(h <= n as u32, "transition graph has a non-trivial cycle");
            }
            (cur, h)
        })
        .collect();
    let (limit, height) = walk.into_iter().unzip();
    TransitionGraph {
        n,
        next,
        limit,
        height,
        dependency,
        flips,
    }
}

/// Violated structural clauses; empty when the graph has the predicted
/// structure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_structure(graph: &TransitionGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let dep = &graph.dependency;
    let n = graph.n;
    let k = dep.loops.len();
    let f_mask = dep.loops.iter().fold(0u32, |m, &j| m | 1 << j);
    let summary = graph.summary();

    // Same component iff same restriction to F: every vertex agrees with its
    // loop vertex on F, and distinct loop vertices differ on F.
    if let Some(t) = (0..graph.vertex_count() as u32)
        .find(|&t| (t ^ graph.limit[t as usize]) & f_mask != 0)
    {
        violations.push(format!(
            "vertex {} disagrees with its loop vertex on F",
            graph.vertex(t)
        ));
    }
    let mut restrictions: Vec<u32> = summary.components.iter().map(|c| c.loop_mask & f_mask).collect();
    restrictions.sort_unstable();
    restrictions.dedup();
    if restrictions.len() != summary.components.len() {
        violations.push("two components share a restriction to F".into());
    }

    if summary.components.len() != 1 << k {
        violations.push(format!(
            "expected 2^{k} components, found {}",
            summary.components.len()
        ));
    }
    for c in &summary.components {
        if c.size != 1 << (n - k) {
            violations.push(format!(
                "component of {} has {} vertices, expected 2^{}",
                c.loop_vertex,
                c.size,
                n - k
            ));
        }
    }

    // Each component is a tree with one loop vertex: exactly one fixed point
    // per component and every walk reaches it (guaranteed by construction of
    // `limit`, re-checked here).
    let mut fixed_per_comp: HashMap<u32, usize> = HashMap::new();
    for t in 0..graph.vertex_count() as u32 {
        if graph.next[t as usize] == t {
            *fixed_per_comp.entry(graph.limit[t as usize]).or_default() += 1;
            if graph.limit[t as usize] != t {
                violations.push(format!("loop vertex {} is not its own limit", graph.vertex(t)));
            }
        }
    }
    for c in &summary.components {
        let count = fixed_per_comp.get(&c.loop_mask).copied().unwrap_or(0);
        if count != 1 {
            violations.push(format!(
                "component of {} has {count} loop vertices",
                c.loop_vertex
            ));
        }
    }

    // d(V(t))_j = d(t)_{parent(j)}
    let basic_d = (0..graph.vertex_count() as u32).find(|&t| {
        let lhs = graph.d(graph.next[t as usize]);
        let rhs = transition_mask(&dep.parent, 0, graph.d(t));
        lhs != rhs
    });
    if let Some(t) = basic_d {
        violations.push(format!("d(V(t)) rule fails at {}", graph.vertex(t)));
    }

    // d maps each component bijectively onto {d : d|F = +1}, and the induced
    // correspondence with the reference component preserves edges.
    if (0..graph.vertex_count() as u32).any(|t| graph.d(t) & f_mask != 0) {
        violations.push("d(t) is negative on a loop column".into());
    }
    if let Some(reference) = summary.components.first() {
        let mut by_d: HashMap<u32, u32> = HashMap::new();
        let mut injective = true;
        for t in 0..graph.vertex_count() as u32 {
            if graph.limit[t as usize] == reference.loop_mask
                && by_d.insert(graph.d(t), t).is_some()
            {
                injective = false;
            }
        }
        let mut seen: HashMap<(u32, u32), u32> = HashMap::new();
        for t in 0..graph.vertex_count() as u32 {
            if seen.insert((graph.limit[t as usize], graph.d(t)), t).is_some() {
                injective = false;
            }
        }
        if !injective {
            violations.push("d is not injective on a component".into());
        }
        let iso = (0..graph.vertex_count() as u32).all(|t| {
            let Some(&image) = by_d.get(&graph.d(t)) else {
                return false;
            };
            graph.d(graph.next[image as usize]) == graph.d(graph.next[t as usize])
        });
        if !iso {
            violations.push("components are not isomorphic under the d-map".into());
        }
    }

    if graph.depth() != dep.depth {
        violations.push(format!(
            "transition graph depth {} differs from dependency depth {}",
            graph.depth(),
            dep.depth
        ));
    }
    // V^(p-1)(t) is a loop vertex for all t; V^(p-2)(t) is not for some t.
    let p = dep.depth;
    let power = |mut t: u32, times: usize| {
        for _ in 0..times {
            t = graph.step(t);
        }
        t
    };
    let is_loop = |t: u32| graph.next[t as usize] == t;
    if !(0..graph.vertex_count() as u32).all(|t| is_loop(power(t, p - 1))) {
        violations.push(format!("V^{} does not reach loop vertices everywhere", p - 1));
    }
    if p >= 2 && (0..graph.vertex_count() as u32).all(|t| is_loop(power(t, p - 2))) {
        violations.push(format!("V^{} already reaches loop vertices everywhere", p - 2));
    }

    ValidationReport { violations }
}

/// DOT rendering of the dependency graph with 1-based column labels.
pub fn dependency_dot(graph: &SignDependencyGraph) -> String {
    let mut out = String::from("digraph sign_dependency {\n");
    for j in 0..graph.n() {
        let shape = if graph.is_loop(j) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  c{} [label=\"{}\", shape={shape}];", j + 1, j + 1);
    }
    for (j, &p) in graph.parent.iter().enumerate() {
        let _ = writeln!(out, "  c{} -> c{};", p + 1, j + 1);
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the full transition graph, vertices labelled by their
/// sign strings.
pub fn transition_dot(graph: &TransitionGraph) -> String {
    let mut out = String::from("digraph sign_transition {\n");
    for t in 0..graph.vertex_count() as u32 {
        let fixed = graph.next[t as usize] == t;
        let style = if fixed {
            "shape=doublecircle, style=filled, fillcolor=lightgray"
        } else {
            "shape=ellipse"
        };
        let _ = writeln!(out, "  v{t} [label=\"{}\", {style}];", graph.vertex(t));
    }
    for t in 0..graph.vertex_count() as u32 {
        let _ = writeln!(out, "  v{t} -> v{};", graph.next[t as usize]);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &str) -> SignVector {
        SignVector::new(s.chars().map(|c| if c == '+' { 1 } else { -1 }).collect()).unwrap()
    }

    fn small() -> DenseMatrix {
        DenseMatrix::from_rows(&[[3.0, 2.0], [1.0, 0.5]]).unwrap()
    }

    #[test]
    fn transition_examples() {
        let p = profile(&small()).unwrap();
        for (from, to) in [("++", "++"), ("+-", "++"), ("-+", "--"), ("--", "--")] {
            assert_eq!(v_transition(&p, &sv(from)).unwrap(), sv(to), "from {from}");
        }
        let p = profile(&DenseMatrix::identity(2).unwrap()).unwrap();
        for s in ["++", "+-", "-+", "--"] {
            assert_eq!(v_transition(&p, &sv(s)).unwrap(), sv(s));
        }
    }

    #[test]
    fn u_sign_examples() {
        let p = profile(&DenseMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(u_sign(&p, &sv("+-")).unwrap(), sv("+-"));
        let p = profile(&small()).unwrap();
        assert_eq!(u_sign(&p, &sv("-+")).unwrap(), sv("--"));
        assert!(u_sign(&p, &sv("-+-")).is_err());
    }

    #[test]
    fn dependency_examples() {
        let g = build_dependency_graph(&profile(&small()).unwrap());
        assert_eq!(g.loops, vec![0]);
        assert_eq!(g.depth, 2);
        assert_eq!(g.reach, vec![0, 0]);
        assert_eq!(g.parent, vec![0, 0]);

        let g = build_dependency_graph(&profile(&DenseMatrix::identity(4).unwrap()).unwrap());
        assert_eq!(g.loops, vec![0, 1, 2, 3]);
        assert_eq!(g.depth, 1);
        assert_eq!(g.reach, vec![0, 1, 2, 3]);
    }

    #[test]
    fn enumeration_examples() {
        let g = enumerate_transition_graph(&small(), DEFAULT_ENUMERATION_LIMIT).unwrap();
        let s = g.summary();
        assert_eq!(s.components.len(), 2);
        assert_eq!(s.components[0].loop_vertex, sv("++"));
        assert_eq!(s.components[1].loop_vertex, sv("--"));
        assert!(s.components.iter().all(|c| c.size == 2 && c.depth == 2));
        // (+,-) and (+,+) together, (-,+) and (-,-) together
        assert_eq!(g.limit[sv("+-").to_mask() as usize], sv("++").to_mask() as u32);
        assert_eq!(g.limit[sv("-+").to_mask() as usize], sv("--").to_mask() as u32);
        assert!(validate_structure(&g).passed());

        let g = enumerate_transition_graph(&DenseMatrix::identity(2).unwrap(), 20).unwrap();
        let s = g.summary();
        assert_eq!(s.components.len(), 4);
        assert!(s.components.iter().all(|c| c.size == 1 && c.depth == 1));

        let g = enumerate_transition_graph(&DenseMatrix::identity(3).unwrap(), 20).unwrap();
        assert_eq!(g.summary().components.len(), 8);
        assert!(validate_structure(&g).passed());
    }

    #[test]
    fn enumeration_limit() {
        let a = DenseMatrix::identity(5).unwrap();
        assert!(matches!(
            enumerate_transition_graph(&a, 4),
            Err(Error::TooLarge { n: 5, limit: 4 })
        ));
    }

    #[test]
    fn validator_catches_a_broken_graph() {
        let mut g = enumerate_transition_graph(&small(), 20).unwrap();
        g.next[sv("+-").to_mask() as usize] = sv("+-").to_mask() as u32;
        assert!(!validate_structure(&g).passed());
    }

    #[test]
    fn dot_output() {
        let g = build_dependency_graph(&profile(&DenseMatrix::identity(2).unwrap()).unwrap());
        let dot = dependency_dot(&g);
        assert!(dot.starts_with("digraph sign_dependency {\n"));
        assert!(dot.contains("c1 -> c1;"));
        assert!(dot.contains("c2 -> c2;"));
        assert_eq!(dot.matches("doublecircle").count(), 2);

        let full = enumerate_transition_graph(&small(), 20).unwrap();
        let dot = transition_dot(&full);
        assert_eq!(dot.matches("label=").count(), 4);
        // (+,-) -> (+,+)
        assert!(dot.contains("v2 -> v0;"));
        assert!(dot.contains("v0 -> v0;"));
        assert!(dot.ends_with("}\n"));
    }
}

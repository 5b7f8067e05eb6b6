//! Global search over sign classes.
//!
//! The optimal rank-1 error is the smallest limit error over runs started
//! from loop vertices of the sign transition graph, and a loop vertex is
//! determined by its restriction to the loop columns `F`. The search keeps a
//! DNF over variables indexed by `F` recording patterns already known not
//! to improve on a finished run, and repeatedly:
//!
//! 1. picks a pattern `x` on `F` such that neither `x` nor `-x` is covered,
//! 2. runs alternating minimization from `x` (off-`F` components set to +1),
//! 3. certifies the limit with a two-dimensional alternance on columns
//!    `s1..sk`, and
//! 4. adds the conjunction fixing the limit's signs on the loop columns
//!    `reach(s1), ..., reach(sk)`.
//!
//! It stops when every pattern is covered up to negation.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::alternance::{certify, AlternanceCertificate, DEFAULT_TOLERANCE_LADDER};
use crate::altmin::{AltMin, AltMinOptions};
use crate::error::{Error, Result};
use crate::matcore::{ChebyshevVector, DenseMatrix, SignVector};
use crate::random::stream;
use crate::signgraph::{build_dependency_graph, SignDependencyGraph};

/// One conjunction: `(position in F, required sign)` pairs sorted by
/// position.
pub type Clause = Vec<(usize, i8)>;

/// Disjunction of conjunctions over the sign variables of the loop columns.
/// No clauses is the constant-false DNF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf {
    /// Loop columns, ascending; variable `k` belongs to column `variables[k]`.
    pub variables: Vec<usize>,
    pub clauses: Vec<Clause>,
}

impl Dnf {
    pub fn new(variables: Vec<usize>) -> Self {
        Self {
            variables,
            clauses: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// Adds a conjunction, deduplicating its literals. Returns `false`
    /// (leaving the DNF unchanged) when the literals contradict each other.
    pub fn add_clause(&mut self, mut literals: Clause) -> bool {
        literals.sort_unstable();
        literals.dedup();
        if literals.windows(2).any(|w| w[0].0 == w[1].0) {
            return false;
        }
        self.clauses.push(literals);
        true
    }
}

fn satisfies(clause: &[(usize, i8)], pattern: &SignVector) -> bool {
    clause.iter().all(|&(k, s)| pattern.get(k) == s)
}

/// Whether some clause holds on the pattern (given on `F`, in variable
/// order).
pub fn dnf_covers(b: &Dnf, pattern: &SignVector) -> Result<bool> {
    if pattern.len() != b.len() {
        return Err(Error::VariableMismatch {
            expected: b.len(),
            got: pattern.len(),
        });
    }
    Ok(b.clauses.iter().any(|c| satisfies(c, pattern)))
}

/// Appends the conjunction fixing the signs of `w` on the loop columns
/// reached by the alternance columns. Columns are 0-based.
pub fn dnf_add_alternance(b: &Dnf, w: &SignVector, columns: &[usize], reach: &[usize]) -> Dnf {
    let mut out = b.clone();
    let literals = columns
        .iter()
        .map(|&s| {
            let l = reach[s];
            let k = b
                .variables
                .binary_search(&l)
                .expect("reach maps into the loop columns");
            (k, w.get(l))
        })
        .collect();
    out.add_clause(literals);
    out
}

/// Finds a pattern on `F` with neither it nor its negation covered by `b`.
///
/// Equivalently, every clause of `b` and of its negation must be falsified.
/// The search is a plain DPLL: a variable is forced whenever all other
/// literals of some clause already hold, decisions go to the lowest open
/// variable of the shortest live clause with `+1` tried first (or a random
/// order per decision when `rng` is given), and variables left over once
/// every clause is falsified are set to `+1`. The first variable is pinned
/// to `+1`, which loses nothing since `x` qualifies exactly when `-x` does.
pub fn next_uncovered<R: Rng + ?Sized>(b: &Dnf, rng: Option<&mut R>) -> Option<SignVector> {
    if b.clauses.iter().any(|c| c.is_empty()) {
        return None;
    }
    if b.is_empty() {
        return Some(SignVector::all_positive(0));
    }
    Search::new(b).run(rng)
}

struct Decision {
    var: usize,
    trail_mark: usize,
    branches: [i8; 2],
    tried: usize,
}

struct Search {
    /// Clauses of `b` followed by their negations.
    clauses: Vec<Clause>,
    /// `occurrences[k]`: `(clause, sign)` for every literal on variable `k`.
    occurrences: Vec<Vec<(usize, i8)>>,
    satisfied: Vec<usize>,
    falsified: Vec<usize>,
    assignment: Vec<i8>,
    trail: Vec<usize>,
    pending: Vec<usize>,
}

impl Search {
    fn new(b: &Dnf) -> Self {
        let nvars = b.len();
        let mut clauses = b.clauses.clone();
        clauses.extend(
            b.clauses
                .iter()
                .map(|c| c.iter().map(|&(k, s)| (k, -s)).collect::<Clause>()),
        );
        let mut occurrences = vec![Vec::new(); nvars];
        for (c, clause) in clauses.iter().enumerate() {
            for &(k, s) in clause {
                occurrences[k].push((c, s));
            }
        }
        let total = clauses.len();
        Self {
            clauses,
            occurrences,
            satisfied: vec![0; total],
            falsified: vec![0; total],
            assignment: vec![0; nvars],
            trail: Vec::with_capacity(nvars),
            pending: Vec::new(),
        }
    }

    fn assign(&mut self, k: usize, val: i8) {
        self.assignment[k] = val;
        self.trail.push(k);
        for &(c, s) in &self.occurrences[k] {
            if s == val {
                self.satisfied[c] += 1;
                if self.falsified[c] == 0 && self.satisfied[c] + 1 >= self.clauses[c].len() {
                    self.pending.push(c);
                }
            } else {
                self.falsified[c] += 1;
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let k = self.trail.pop().expect("trail longer than mark");
            let val = self.assignment[k];
            for &(c, s) in &self.occurrences[k] {
                if s == val {
                    self.satisfied[c] -= 1;
                } else {
                    self.falsified[c] -= 1;
                }
            }
            self.assignment[k] = 0;
        }
        self.pending.clear();
    }

    /// Unit propagation; false on a satisfied clause.
    fn propagate(&mut self) -> bool {
        while let Some(c) = self.pending.pop() {
            if self.falsified[c] > 0 {
                continue;
            }
            let len = self.clauses[c].len();
            if self.satisfied[c] == len {
                self.pending.clear();
                return false;
            }
            if self.satisfied[c] + 1 == len {
                let (k, s) = *self.clauses[c]
                    .iter()
                    .find(|&&(k, _)| self.assignment[k] == 0)
                    .expect("one literal unassigned");
                self.assign(k, -s);
            }
        }
        true
    }

    fn run<R: Rng + ?Sized>(&mut self, mut rng: Option<&mut R>) -> Option<SignVector> {
        for c in 0..self.clauses.len() {
            if self.clauses[c].len() == 1 {
                self.pending.push(c);
            }
        }
        if !self.propagate() {
            return None;
        }
        // The clause set is closed under negation, so the root cannot force
        // the first variable without also refuting it.
        if self.assignment[0] == 0 {
            self.assign(0, 1);
            if !self.propagate() {
                return None;
            }
        }

        let mut stack: Vec<Decision> = Vec::new();
        loop {
            let Some(var) = self.pick() else {
                // Every clause is falsified; the rest is free.
                let signs = self.assignment.iter().map(|&x| if x == 0 { 1 } else { x });
                return Some(SignVector::new(signs.collect()).expect("signs are +-1"));
            };
            let mut branches = [1i8, -1];
            if let Some(r) = rng.as_deref_mut() {
                branches.shuffle(r);
            }
            stack.push(Decision {
                var,
                trail_mark: self.trail.len(),
                branches,
                tried: 0,
            });
            // try branches, backtracking through earlier decisions on failure
            loop {
                let d = stack.last_mut()?;
                if d.tried == 2 {
                    let d = stack.pop().expect("nonempty");
                    self.undo_to(d.trail_mark);
                    continue;
                }
                let (var, val, mark) = (d.var, d.branches[d.tried], d.trail_mark);
                d.tried += 1;
                self.undo_to(mark);
                self.assign(var, val);
                if self.propagate() {
                    break;
                }
            }
        }
    }

    /// Lowest unassigned variable of the live clause with the fewest
    /// unassigned literals; `None` once no clause can still be satisfied.
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (c, clause) in self.clauses.iter().enumerate() {
            if self.falsified[c] > 0 {
                continue;
            }
            let open = clause.len() - self.satisfied[c];
            if best.is_none_or(|(o, _)| open < o) {
                let var = clause
                    .iter()
                    .map(|&(k, _)| k)
                    .find(|&k| self.assignment[k] == 0)
                    .expect("live clause has an unassigned literal");
                best = Some((open, var));
                if open == 2 {
                    break;
                }
            }
        }
        best.map(|(_, var)| var)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    pub altmin: AltMinOptions,
    pub tol_ladder: Vec<f64>,
    /// Maximum number of alternating minimization runs; `None` means
    /// `10 * n`.
    pub run_limit: Option<usize>,
    /// Shuffle the candidate branch order with this seed.
    pub seed: Option<u64>,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            altmin: AltMinOptions::default(),
            tol_ladder: DEFAULT_TOLERANCE_LADDER.to_vec(),
            run_limit: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Every pattern is covered; the result is optimal.
    DnfFull,
    /// Stopped at the run limit; the result is the best found so far.
    RunLimit,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    /// Starting pattern on `F`.
    pub pattern: SignVector,
    pub limit_error: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Signs of the final `v`.
    pub limit_signs: SignVector,
    pub certificate: Option<AlternanceCertificate>,
    /// Conjunction added to the DNF after this run.
    pub clause: Clause,
}

#[derive(Debug, Clone)]
pub struct OptResult {
    pub u: ChebyshevVector,
    pub v: ChebyshevVector,
    pub error: f64,
    pub runs: Vec<RunRecord>,
    pub loop_columns: Vec<usize>,
    pub terminated: Termination,
    pub dnf: Dnf,
}

impl OptResult {
    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn certificate_failures(&self) -> usize {
        self.runs.iter().filter(|r| r.certificate.is_none()).count()
    }
}

pub fn optimize(a: &DenseMatrix, opts: &OptimizeOptions) -> Result<OptResult> {
    let engine = AltMin::new(a)?;
    optimize_with(&engine, opts)
}

pub fn optimize_with(engine: &AltMin, opts: &OptimizeOptions) -> Result<OptResult> {
    let a = engine.matrix();
    let n = a.cols();
    let graph = build_dependency_graph(engine.profile());
    let run_limit = opts.run_limit.unwrap_or(10 * n).max(1);
    let mut rng = opts.seed.map(|s| stream(s, &[0x6f70_7469]));
    let mut dnf = Dnf::new(graph.loops.clone());
    let mut runs: Vec<RunRecord> = Vec::new();
    let mut best: Option<(f64, ChebyshevVector, ChebyshevVector)> = None;

    let terminated = loop {
        let Some(pattern) = next_uncovered(&dnf, rng.as_mut()) else {
            break Termination::DnfFull;
        };
        if runs.len() >= run_limit {
            break Termination::RunLimit;
        }
        let v0 = start_vector(&graph, &pattern);
        let run = engine.iterate(&v0, &opts.altmin)?;
        let certificate = certify(a, &run.u, &run.v, &opts.tol_ladder);
        let limit_signs = run.v.signs();
        let clause = clause_for(&graph, &dnf, &pattern, &limit_signs, certificate.as_ref());
        let added = dnf.add_clause(clause.clone());
        debug_assert!(added);

        if best.as_ref().is_none_or(|b| run.limit_error < b.0) {
            best = Some((run.limit_error, run.u.clone(), run.v.clone()));
        }
        runs.push(RunRecord {
            pattern,
            limit_error: run.limit_error,
            iterations: run.iterations,
            converged: run.converged,
            limit_signs,
            certificate,
            clause,
        });
    };

    let (error, u, v) = match best {
        Some(b) => b,
        None => {
            // F is never empty for a PC matrix, so at least one run happens;
            // this only triggers on a zero run limit.
            let run = engine.iterate(&start_vector(&graph, &SignVector::all_positive(graph.loops.len())), &opts.altmin)?;
            (run.limit_error, run.u, run.v)
        }
    };
    Ok(OptResult {
        u,
        v,
        error,
        runs,
        loop_columns: graph.loops.clone(),
        terminated,
        dnf,
    })
}

/// Pattern on `F` extended to all columns with `+1`.
pub fn start_vector(graph: &SignDependencyGraph, pattern: &SignVector) -> ChebyshevVector {
    let mut v = vec![1.0; graph.n()];
    for (k, &j) in graph.loops.iter().enumerate() {
        v[j] = f64::from(pattern.get(k));
    }
    ChebyshevVector::new(v).expect("entries are +-1")
}

/// The conjunction recorded after a run: the alternance clause when the
/// certificate exists and the limit kept the starting signs on `F`,
/// otherwise the clause pinning every variable to the starting pattern.
fn clause_for(
    graph: &SignDependencyGraph,
    dnf: &Dnf,
    pattern: &SignVector,
    limit_signs: &SignVector,
    certificate: Option<&AlternanceCertificate>,
) -> Clause {
    let consistent = graph
        .loops
        .iter()
        .enumerate()
        .all(|(k, &j)| limit_signs.get(j) == pattern.get(k));
    match certificate {
        Some(cert) if consistent => {
            let updated = dnf_add_alternance(dnf, limit_signs, &cert.columns, &graph.reach);
            updated.clauses.last().cloned().expect("clause appended")
        }
        _ => (0..pattern.len()).map(|k| (k, pattern.get(k))).collect(),
    }
}

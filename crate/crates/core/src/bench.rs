//! Runs-versus-size benchmark on random standard-normal matrices.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::Result;
use crate::globalopt::{optimize, OptimizeOptions};
use crate::random::{standard_normal_pc_matrix, stream};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub trial: usize,
    pub runs: usize,
    pub wall_ms: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub n: usize,
    pub trials: usize,
    pub mean_runs: f64,
    pub mean_wall_ms: f64,
    pub mean_error: f64,
}

/// Optimizes `trials` square matrices of each size. Trial `(n, t)` draws its
/// matrix from the stream keyed by `(seed, n, t)`, so records do not depend
/// on scheduling; they come back sorted by `(n, trial)`.
pub fn run_bench(
    sizes: &[usize],
    trials: usize,
    seed: u64,
    opts: &OptimizeOptions,
) -> Result<Vec<BenchRecord>> {
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, t)))
        .collect();
    let mut records = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let mut rng = stream(seed, &[n as u64, trial as u64]);
            let a = standard_normal_pc_matrix(n, n, &mut rng);
            let start = Instant::now();
            let res = optimize(&a, opts)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(BenchRecord {
                n,
                trial,
                runs: res.run_count(),
                wall_ms,
                error: res.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.n, r.trial));
    Ok(records)
}

/// Per-size means in ascending order of `n`.
pub fn summarize(records: &[BenchRecord]) -> Vec<BenchSummary> {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let group: Vec<&BenchRecord> = records.iter().filter(|r| r.n == n).collect();
            let k = group.len() as f64;
            BenchSummary {
                n,
                trials: group.len(),
                mean_runs: group.iter().map(|r| r.runs as f64).sum::<f64>() / k,
                mean_wall_ms: group.iter().map(|r| r.wall_ms).sum::<f64>() / k,
                mean_error: group.iter().map(|r| r.error).sum::<f64>() / k,
            }
        })
        .collect()
}

/// CSV with header `n,trial,runs,wall_ms,error`, one row per record followed
/// by one `trial = -1` row of means per size.
pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("n,trial,runs,wall_ms,error\n");
    for r in records {
        writeln!(out, "{},{},{},{},{}", r.n, r.trial, r.runs, r.wall_ms, r.error)
            .expect("writing to a String");
    }
    for s in summarize(records) {
        writeln!(
            out,
            "{},-1,{},{},{}",
            s.n, s.mean_runs, s.mean_wall_ms, s.mean_error
        )
        .expect("writing to a String");
    }
    out
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

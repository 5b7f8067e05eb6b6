use std::collections::HashSet;

use chebrank::alternance::{certify, residual_support, DEFAULT_TOLERANCE_LADDER};
use chebrank::altmin::{AltMin, AltMinOptions};
use chebrank::globalopt::{dnf_covers, optimize, optimize_with, OptimizeOptions, Termination};
use chebrank::matcore::{ChebyshevVector, DenseMatrix, SignVector};
use chebrank::oracle::exhaustive_optimize;
use chebrank::random::{standard_normal_pc_matrix, stream};
use chebrank::signgraph::build_dependency_graph;
use rand::seq::SliceRandom;

#[test]
fn result_is_minimum_over_all_sign_vectors() {
    let opts = AltMinOptions::default();
    for n in 3..=8usize {
        for trial in 0..6u64 {
            let mut rng = stream(41, &[n as u64, trial]);
            let a = standard_normal_pc_matrix(n, n, &mut rng);
            let engine = AltMin::new(&a).unwrap();
            let all = (0..1u64 << n)
                .map(|m| engine.estimate_e(&SignVector::from_mask(m, n), &opts).unwrap())
                .fold(f64::INFINITY, f64::min);
            let res = optimize_with(&engine, &OptimizeOptions::default()).unwrap();
            assert!((res.error - all).abs() <= 1e-9 * all.max(1.0), "n={n}: {} vs {all}", res.error);
            assert_eq!(res.terminated, Termination::DnfFull);
        }
    }
}

#[test]
fn pruning_is_sound_and_halved() {
    let opts = AltMinOptions::default();
    for n in 3..=8usize {
        for trial in 0..5u64 {
            let mut rng = stream(42, &[n as u64, trial]);
            let a = standard_normal_pc_matrix(n, n, &mut rng);
            let engine = AltMin::new(&a).unwrap();
            let graph = build_dependency_graph(engine.profile());
            let res = optimize_with(&engine, &OptimizeOptions::default()).unwrap();
            let k = res.loop_columns.len();
            assert!(res.run_count() >= 1);
            assert!(res.run_count() as u64 <= 1u64 << (k - 1));

            let seen: HashSet<SignVector> = res.runs.iter().map(|r| r.pattern.clone()).collect();
            assert_eq!(seen.len(), res.run_count());
            assert!(res.runs.iter().all(|r| !seen.contains(&-&r.pattern)));

            let best = res.runs.iter().map(|r| r.limit_error).fold(f64::INFINITY, f64::min);
            assert_eq!(best, res.error);

            // every covered pattern is no better than the best completed run
            for m in 0..1u64 << n {
                let t = SignVector::from_mask(m, n);
                let x = t.restrict(&graph.loops);
                if dnf_covers(&res.dnf, &x).unwrap() {
                    let e = engine.estimate_e(&t, &opts).unwrap();
                    assert!(res.error <= e + 1e-9, "covered pattern {x} reaches {e} < {}", res.error);
                }
            }
        }
    }
}

#[test]
fn seeded_shuffle_finds_the_same_optimum() {
    let mut rng = stream(43, &[]);
    for _ in 0..10 {
        let a = standard_normal_pc_matrix(7, 7, &mut rng);
        let base = optimize(&a, &OptimizeOptions::default()).unwrap();
        let shuffled = optimize(
            &a,
            &OptimizeOptions {
                seed: Some(5),
                ..Default::default()
            },
        )
        .unwrap();
        assert!((base.error - shuffled.error).abs() <= 1e-9 * base.error.max(1.0));
    }
}

#[test]
fn oracle_examples() {
    let a = DenseMatrix::from_rows(&[[3.0, 2.0], [1.0, 0.5]]).unwrap();
    let o = exhaustive_optimize(&a, &AltMinOptions::default()).unwrap();
    assert_eq!(o.per_class_errors.len(), 2);
    let r = optimize(&a, &OptimizeOptions::default()).unwrap();
    assert!((o.error - r.error).abs() <= 1e-10);

    let mut rng = stream(44, &[]);
    let b = standard_normal_pc_matrix(5, 5, &mut rng);
    let o = exhaustive_optimize(&b, &AltMinOptions::default()).unwrap();
    assert_eq!(o.per_class_errors.len(), 16);
    assert!(o.per_class_errors.keys().all(|p| p.get(0) == 1));
    assert_eq!(o.per_class_errors.values().copied().fold(f64::INFINITY, f64::min), o.error);
}

/// Leading singular pair by power iteration on `A^T A`.
fn rank_one_svd(a: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (a.rows(), a.cols());
    let mut v = vec![1.0; n];
    for _ in 0..2000 {
        let av: Vec<f64> = (0..m).map(|i| (0..n).map(|j| a.get(i, j) * v[j]).sum()).collect();
        let mut w: Vec<f64> = (0..n).map(|j| (0..m).map(|i| a.get(i, j) * av[i]).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        v = w;
    }
    let u = (0..m).map(|i| (0..n).map(|j| a.get(i, j) * v[j]).sum()).collect();
    (u, v)
}

#[test]
fn oracle_beats_truncated_svd_and_ignores_permutations() {
    let mut rng = stream(45, &[]);
    let opts = AltMinOptions::default();
    for _ in 0..10 {
        let a = standard_normal_pc_matrix(6, 6, &mut rng);
        let o = exhaustive_optimize(&a, &opts).unwrap();
        let (u, v) = rank_one_svd(&a);
        assert!(o.error <= a.residual_norm(&u, &v) + 1e-12);

        let mut rp: Vec<usize> = (0..6).collect();
        let mut cp: Vec<usize> = (0..6).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let rows: Vec<Vec<f64>> = rp.iter().map(|&i| cp.iter().map(|&j| a.get(i, j)).collect()).collect();
        let p = exhaustive_optimize(&DenseMatrix::from_rows(&rows).unwrap(), &opts).unwrap();
        assert!((p.error - o.error).abs() <= 1e-9 * o.error.max(1.0));
    }
}

#[test]
fn row_witnesses_and_support_shrinkage_at_limits() {
    let mut rng = stream(46, &[]);
    let opts = AltMinOptions::default();
    for _ in 0..40 {
        let a = standard_normal_pc_matrix(6, 6, &mut rng);
        let engine = AltMin::new(&a).unwrap();
        let v0 = ChebyshevVector::new(vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0]).unwrap();
        let run = engine.iterate(&v0, &opts).unwrap();
        assert!(run.converged);
        let tol = DEFAULT_TOLERANCE_LADDER[0];
        let support = residual_support(&a, &run.u, &run.v, tol);
        assert_eq!(support.error, run.limit_error);
        for &i in &support.rows {
            let taus: Vec<i8> = support
                .entries
                .iter()
                .zip(&support.tau)
                .filter(|(e, _)| e.0 == i)
                .map(|(_, &t)| t)
                .collect();
            assert!(taus.contains(&1) && taus.contains(&-1), "row {i} lacks a witness");
        }
        // one more column half-step keeps the error and cannot add entries
        let (w, err) = engine.psi(&run.u).unwrap();
        if (err - run.limit_error).abs() <= 1e-12 * run.limit_error {
            let next = residual_support(&a, &run.u, &w, tol);
            let before: HashSet<_> = support.entries.iter().collect();
            assert!(next.entries.iter().all(|e| before.contains(e)));
        }
        assert!(certify(&a, &run.u, &run.v, &DEFAULT_TOLERANCE_LADDER).is_some());
    }
}

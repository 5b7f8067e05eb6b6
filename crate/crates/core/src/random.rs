//! Seeded matrix generation.
//!
//! Streams come from ChaCha8 seeded through SplitMix64 mixing of the
//! caller's key; normal deviates use the ziggurat sampler of `rand_distr`.
//! Both are platform independent, so a seed fixes every generated entry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{StandardNormal, Uniform};

use crate::matcore::{preserves_chebyshev, DenseMatrix};

pub type MatrixRng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent stream for the key `(seed, parts...)`.
pub fn stream(seed: u64, parts: &[u64]) -> MatrixRng {
    let key = parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)));
    ChaCha8Rng::seed_from_u64(key)
}

pub fn standard_normal_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix {
    let data = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    DenseMatrix::new(rows, cols, data).expect("sizes checked by caller")
}

/// Standard-normal matrix redrawn until every row and column is
/// alternance-free.
pub fn standard_normal_pc_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix {
    loop {
        let a = standard_normal_matrix(rows, cols, rng);
        if preserves_chebyshev(&a).preserves {
            return a;
        }
    }
}

/// Adds i.i.d. uniform noise from `[-eps, eps]` to every entry.
pub fn perturb<R: Rng + ?Sized>(a: &DenseMatrix, eps: f64, rng: &mut R) -> DenseMatrix {
    if eps <= 0.0 {
        return a.clone();
    }
    let dist = Uniform::new_inclusive(-eps, eps).expect("finite positive range");
    let data = a.data().iter().map(|x| x + rng.sample(dist)).collect();
    DenseMatrix::new(a.rows(), a.cols(), data).expect("shape unchanged")
}

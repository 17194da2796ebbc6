// SPDX-License-Identifier: Apache-2.0

//! Job generation. Every architecture sees the same jobs for a given
//! `(stimulus, n, seed)`.

use nibmul_core::VectorJob;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Stimulus;

pub fn jobs(stimulus: Stimulus, n: usize, seed: u64) -> Vec<VectorJob> {
    match stimulus {
        Stimulus::Exhaustive => exhaustive_jobs(n),
        Stimulus::Random(count) => random_jobs(n, count, seed),
    }
}

pub fn random_jobs(n: usize, count: usize, seed: u64) -> Vec<VectorJob> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    (0..count)
        .map(|_| {
            let a: Vec<u8> = (0..n).map(|_| rng.random()).collect();
            VectorJob::from_bytes(&a, rng.random()).expect("length checked by caller")
        })
        .collect()
}

/// Covers all 65,536 pairs: for each scalar, the 256 multiplicands in order,
/// `n` per job. A short final job per scalar wraps around to `a = 0`.
pub fn exhaustive_jobs(n: usize) -> Vec<VectorJob> {
    let per_b = 256usize.div_ceil(n);
    (0..=255u8)
        .flat_map(|b| {
            (0..per_b).map(move |j| {
                let a: Vec<u8> = (0..n).map(|i| ((j * n + i) % 256) as u8).collect();
                VectorJob::from_bytes(&a, b).expect("length checked by caller")
            })
        })
        .collect()
}

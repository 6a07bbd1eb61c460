//! Deterministic fan-out: work item ranges are split contiguously across
//! workers and worker `r` draws from stream `r` of the seed.

use std::ops::Range;

use rayon::prelude::*;
use semiflight_core::{stream, StreamRng};

/// Contiguous share of `0..n` owned by worker `rank` of `workers`.
pub fn chunk(n: usize, workers: usize, rank: usize) -> Range<usize> {
    let base = n / workers;
    let extra = n % workers;
    let start = rank * base + rank.min(extra);
    let len = base + usize::from(rank < extra);
    start..start + len
}

/// Runs `job(rng, range)` for every worker rank and returns the results in
/// rank order. Outputs depend on `(seed, workers)` only.
pub fn run_workers<T, E, F>(seed: u64, workers: usize, n: usize, job: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(&mut StreamRng, Range<usize>) -> Result<T, E> + Sync,
{
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build();
    let body = || {
        (0..workers)
            .into_par_iter()
            .map(|rank| {
                let mut rng = stream(seed, rank as u64);
                job(&mut rng, chunk(n, workers, rank))
            })
            .collect::<Result<Vec<T>, E>>()
    };
    match pool {
        Ok(pool) => pool.install(body),
        Err(_) => body(),
    }
}

/// Independent seed for a named sub-experiment (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

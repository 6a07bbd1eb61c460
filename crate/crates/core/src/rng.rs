//! Counter-based random streams.
//!
//! Each stream is a ChaCha8 keystream selected by `(seed, stream_index)`: the
//! seed fixes the key and the index selects one of 2^64 independent nonces, so
//! output depends only on that pair and never on how many workers run.

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

pub type StreamRng = ChaCha8Rng;

/// Name recorded in reports and CSV metadata.
pub const GENERATOR_NAME: &str = "chacha8";

pub fn stream(seed: u64, stream_index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_index);
    rng
}

/// Uniform on the open interval (0, 1).
#[inline]
pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

#[inline]
pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

#[inline]
pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Writes a direction uniform on the unit sphere `S^{d-1}` into `out`
/// (`d = out.len()`); for `d = 1` this is a fair ±1.
pub fn unit_vector_into<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    #[allow(unused_imports)]
    use num_traits::Float;
    if out.len() == 1 {
        out[0] = if rng.random::<bool>() { 1.0 } else { -1.0 };
        return;
    }
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = normal(rng);
            norm2 += *x * *x;
        }
        if norm2 > 1e-300 {
            let inv = 1.0 / norm2.sqrt();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

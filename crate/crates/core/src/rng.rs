//! Seeded randomness helpers.
//!
//! Every stochastic component of the library draws from a [`ChaCha8Rng`]
//! seeded through these helpers, so runs are bit-reproducible for a fixed
//! master seed regardless of thread count or platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// SplitMix64 finalizer, used to decorrelate derived seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive an independent stream seed from a master seed and a tag
/// (sample index, shift index, row/column side, ...).
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    master ^ splitmix64(tag)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw on [0, 1) with 53 bits of precision.
pub fn uniform_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in [0, n). Modulo bias is negligible at the sizes used here.
pub fn uniform_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    debug_assert!(n > 0);
    (rng.next_u64() % n as u64) as usize
}

/// In-place Fisher-Yates shuffle.
pub fn shuffle(rng: &mut ChaCha8Rng, items: &mut [usize]) {
    for i in (1..items.len()).rev() {
        let j = uniform_index(rng, i + 1);
        items.swap(i, j);
    }
}

/// Random unit vector with entries drawn uniformly from [-0.5, 0.5).
pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| uniform_f64(rng) - 0.5).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-30 {
            for x in &mut v {
                *x /= norm;
            }
            return v;
        }
    }
}

//! Counter-based random streams.
//!
//! Every sampled row is drawn from its own ChaCha8 stream keyed by
//! `(seed, domain, class)` and selected by the row index, so the value of a row
//! never depends on generation order or on how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Training samples.
pub(crate) const DOMAIN_TRAIN: u64 = 0x7472_6169_6e00_0000;
/// Test samples drawn by the Monte Carlo risk oracle.
pub(crate) const DOMAIN_TEST: u64 = 0x7465_7374_0000_0000;
/// Auxiliary Gaussian matrices used by the trace checks.
pub(crate) const DOMAIN_MATRIX: u64 = 0x6d61_7472_6978_0000;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Hashes an ordered tuple of integers into a single seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x243f_6a88_85a3_08d3, |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}

pub(crate) fn row_rng(seed: u64, domain: u64, class: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, domain, class]));
    rng.set_stream(index);
    rng
}

/// Fills `out` with i.i.d. standard normals from the stream for one row.
pub(crate) fn fill_normal_row(out: &mut [f64], seed: u64, domain: u64, class: u64, index: u64) {
    let mut rng = row_rng(seed, domain, class, index);
    for v in out.iter_mut() {
        *v = StandardNormal.sample(&mut rng);
    }
}

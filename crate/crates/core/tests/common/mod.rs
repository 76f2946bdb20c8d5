//! Shared helpers for the integration suites: seeded random datasets and
//! queries over a configurable coordinate span.
//!
//! Each integration test binary compiles this module separately and uses a
//! different subset of it, so unused-item lints are suppressed.
#![allow(dead_code)]

use allenquery_core::{Dataset, QueryInterval};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic dataset of `n` intervals with starts in `[0, span)` and
/// widths in `[1, max_width]`. Small spans produce duplicate intervals on
/// purpose — duplicates are part of the contract.
pub fn random_dataset(seed: u64, n: usize, span: u64, max_width: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Dataset::new();
    for _ in 0..n {
        let start = rng.gen_range(0..span);
        let width = rng.gen_range(1..=max_width);
        data.push(start, start + width).unwrap();
    }
    data
}

/// One random query interval with the same coordinate distribution.
pub fn random_query(rng: &mut ChaCha8Rng, span: u64, max_width: u64) -> QueryInterval {
    let start = rng.gen_range(0..span);
    let width = rng.gen_range(1..=max_width);
    QueryInterval::new(start, start + width).unwrap()
}

/// Fresh query RNG, decorrelated from the dataset seed.
pub fn query_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15)
}

//! Seeded small random instances that the brute-force oracle can handle.

#![allow(dead_code)]

use fragmap_core::instance::{generate_instance, GeneratorConfig};
use fragmap_core::Instance;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub const DELTAS: [i64; 3] = [5, 50, 101];

/// `n_T` in `[5, 12]`, `n_Q` in `[3, min(8, n_T)]`, scores in `[1, 100]`,
/// threshold drawn from [`DELTAS`].
pub fn small_instance(seed: u64) -> Instance {
    let mut rng = SplitMix64::seed_from_u64(seed ^ 0x5EED_5A11);
    let n_target = 5 + (rng.next_u64() % 8) as usize;
    let n_query = 3 + (rng.next_u64() % (n_target.min(8) as u64 - 2)) as usize;
    let delta = DELTAS[(rng.next_u64() % 3) as usize];
    generate_instance(&GeneratorConfig {
        n_query,
        n_target,
        score_max: 100,
        delta,
        seed: rng.next_u64(),
    })
    .expect("valid generator configuration")
}

/// A random instance with the given sizes.
pub fn with_query_size(seed: u64, n_query: usize, n_target: usize, delta: i64) -> Instance {
    generate_instance(&GeneratorConfig {
        n_query,
        n_target,
        score_max: 100,
        delta,
        seed,
    })
    .expect("valid generator configuration")
}

//! Seeded random instances: uniform labeled trees and uniform scores.
//!
//! The random stream is SplitMix64 with its state initialized to the seed.
//! Bounded integers use rejection sampling on the raw 64-bit outputs, so the
//! same seed yields the same instance on any platform. Draw order: the query
//! Prüfer sequence, the target Prüfer sequence, then scores row by row.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::{FragmentTree, Instance, InstanceError, ScoreMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub n_query: usize,
    pub n_target: usize,
    pub score_max: i64,
    pub delta: i64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), InstanceError> {
        let bad = |m: String| Err(InstanceError::Config(m));
        if self.n_query < 1 {
            return bad("n_query must be at least 1".into());
        }
        if self.n_target < self.n_query {
            return bad(format!(
                "n_target ({}) must be >= n_query ({})",
                self.n_target, self.n_query
            ));
        }
        if self.score_max < 1 {
            return bad("score_max must be at least 1".into());
        }
        if self.delta < 1 {
            return bad("delta must be at least 1".into());
        }
        Ok(())
    }
}

/// Uniform integer in `0..bound`.
fn below(rng: &mut SplitMix64, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return x % bound;
        }
    }
}

/// Decodes a Prüfer sequence over `0..n` (length `n - 2`) into a tree.
pub fn decode_prufer(n: usize, seq: &[usize]) -> FragmentTree {
    assert!(n >= 1);
    if n == 1 {
        return FragmentTree::singleton();
    }
    assert_eq!(seq.len(), n - 2, "Prüfer sequence length must be n - 2");
    let mut degree = vec![1usize; n];
    for &a in seq {
        degree[a] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in seq {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf, a));
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.push(Reverse(a));
        }
    }
    let Reverse(u) = leaves.pop().unwrap();
    let Reverse(v) = leaves.pop().unwrap();
    edges.push((u, v));
    FragmentTree::new(n, &edges).expect("Prüfer decoding always yields a tree")
}

/// Uniformly random labeled tree on `n` nodes.
pub fn random_tree(n: usize, rng: &mut SplitMix64) -> FragmentTree {
    let seq: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| below(rng, n as u64) as usize)
        .collect();
    decode_prufer(n, &seq)
}

pub fn generate_instance(cfg: &GeneratorConfig) -> Result<Instance, InstanceError> {
    cfg.validate()?;
    let mut rng = SplitMix64::seed_from_u64(cfg.seed);
    let query = random_tree(cfg.n_query, &mut rng);
    let target = random_tree(cfg.n_target, &mut rng);
    let rows: Vec<Vec<i64>> = (0..cfg.n_query)
        .map(|_| {
            (0..cfg.n_target)
                .map(|_| 1 + below(&mut rng, cfg.score_max as u64) as i64)
                .collect()
        })
        .collect();
    let scores = ScoreMatrix::from_real_rows(&rows)?;
    Instance::new(query, target, scores, cfg.delta, None, Vec::new())
}

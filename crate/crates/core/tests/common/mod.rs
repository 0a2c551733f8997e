#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cstar_core::graph::{ExtNat, Graph};

/// A multiplicity: mostly 0, sometimes small, rarely infinite.
pub fn random_mult(rng: &mut ChaCha8Rng, density: f64, inf_rate: f64) -> ExtNat {
    if !rng.gen_bool(density) {
        return ExtNat::zero();
    }
    if rng.gen_bool(inf_rate) {
        return ExtNat::Infinite;
    }
    ExtNat::from(rng.gen_range(1..=3u64))
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64, inf_rate: f64) -> Graph {
    let rows = (0..n).map(|_| (0..n).map(|_| random_mult(rng, density, inf_rate)).collect()).collect();
    Graph::from_matrix(rows).unwrap()
}

/// Successor bitmasks of the positive-multiplicity relation.
pub fn successor_masks(g: &Graph) -> Vec<u32> {
    (0..g.len())
        .map(|v| (0..g.len()).filter(|&w| g.mult(v, w).is_positive()).fold(0, |m, w| m | (1 << w)))
        .collect()
}

//! Seeded random graphs for property checks and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Edge weights of generated graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weights {
    Unit,
    /// Uniform on `[lo, hi)`.
    Uniform(f64, f64),
    /// Uniform integers in `1..=max`.
    Integer(u32),
}

impl Weights {
    fn draw(self, rng: &mut impl Rng) -> f64 {
        match self {
            Weights::Unit => 1.0,
            Weights::Uniform(lo, hi) => rng.random_range(lo..hi),
            Weights::Integer(max) => rng.random_range(1..=max) as f64,
        }
    }
}

/// A connected graph on `n` nodes: a random spanning tree plus up to
/// `extra` further distinct edges.
pub fn random_connected(n: usize, extra: usize, weights: Weights, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);
    let mut present = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(n + extra);
    for k in 1..n {
        let parent = order[rng.random_range(0..k)];
        let child = order[k];
        present.insert((child.max(parent), child.min(parent)));
        edges.push((child, parent, weights.draw(&mut rng)));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (n - 1 + extra).min(max_edges);
    while edges.len() < target {
        let a = rng.random_range(1..=n);
        let b = rng.random_range(1..=n);
        if a == b || !present.insert((a.max(b), a.min(b))) {
            continue;
        }
        edges.push((a, b, weights.draw(&mut rng)));
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// Erdős–Rényi `G(n, p)` graph; may be disconnected.
pub fn gnp(n: usize, p: f64, weights: Weights, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 2..=n {
        for j in 1..i {
            if rng.random_bool(p) {
                edges.push((i, j, weights.draw(&mut rng)));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

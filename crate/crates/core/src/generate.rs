//! Seeded random graph generators for tests and benchmarks.

use crate::graph::{Graph, GraphError};
use crate::{Label, Weight};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Planted-partition graph: `communities` blocks of `block_size` vertices,
/// each pair joined with probability `p_in` inside a block and `p_out`
/// across blocks. Unit weights. Vertex `v` belongs to block
/// `v / block_size`.
pub fn planted_partition(
    communities: usize,
    block_size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<Graph, GraphError> {
    let n = communities * block_size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / block_size == v / block_size { p_in } else { p_out };
            if rng.gen_bool(p) {
                edges.push((u as Label, v as Label, 1.0));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Erdős–Rényi `G(n, p)` with weights drawn uniformly from `weights`.
pub fn gnp(n: usize, p: f64, weights: &[Weight], seed: u64) -> Result<Graph, GraphError> {
    assert!(!weights.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                let w = weights[rng.gen_range(0..weights.len())];
                edges.push((u as Label, v as Label, w));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Ground-truth block labels for [`planted_partition`].
pub fn planted_labels(communities: usize, block_size: usize) -> Vec<Label> {
    (0..communities * block_size)
        .map(|v| (v / block_size * block_size) as Label)
        .collect()
}

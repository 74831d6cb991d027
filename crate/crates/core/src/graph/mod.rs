//! Undirected weighted graphs in compressed sparse row form.

mod io;

pub use io::{format_weight, EdgeListOptions, GraphFormat, LoadedGraph};

use crate::{Label, Weight};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex id {id} out of range (graph declares {n} vertices)")]
    IdOutOfRange { id: u64, n: usize },
    #[error("graph has no vertices")]
    Empty,
    #[error("too many vertices: {0}")]
    TooLarge(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Symmetric CSR graph.
///
/// Every arc `i→j` with weight `w` has a matching `j→i` with the same
/// weight. A self-loop `i→i` is stored as a single arc. Neighbor lists are
/// sorted by target id and hold no duplicate targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Label>,
    weights: Vec<Weight>,
}

impl Graph {
    /// Builds a graph on `n` vertices from undirected edges.
    ///
    /// Each `(u, v, w)` contributes `u→v` and `v→u`; repeated pairs have
    /// their weights summed, so `(0, 1, 2.0)` and `(1, 0, 3.0)` give a single
    /// edge of weight 5.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Label, Label, Weight)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        // u32::MAX is reserved as the empty-slot key in sketches.
        if n as u64 >= Label::MAX as u64 {
            return Err(GraphError::TooLarge(n as u64));
        }
        let mut arcs: Vec<(Label, Label, Weight)> = Vec::new();
        for (u, v, w) in edges {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(GraphError::IdOutOfRange { id: id as u64, n });
                }
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(GraphError::Parse {
                    line: 0,
                    msg: format!("edge ({u}, {v}) has non-positive weight {w}"),
                });
            }
            arcs.push((u, v, w));
            if u != v {
                arcs.push((v, u, w));
            }
        }
        arcs.sort_unstable_by_key(|&(u, v, _)| (u, v));

        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(arcs.len());
        let mut weights: Vec<Weight> = Vec::with_capacity(arcs.len());
        let mut last: Option<(Label, Label)> = None;
        for (u, v, w) in arcs {
            if last == Some((u, v)) {
                *weights.last_mut().unwrap() += w;
                continue;
            }
            last = Some((u, v));
            offsets[u as usize + 1] += 1;
            targets.push(v);
            weights.push(w);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Ok(Graph { offsets, targets, weights })
    }

    /// Wraps raw CSR arrays, checking every structural invariant.
    pub fn from_csr(
        offsets: Vec<usize>,
        targets: Vec<Label>,
        weights: Vec<Weight>,
    ) -> Result<Self, GraphError> {
        let bad = |msg: &str| GraphError::Parse { line: 0, msg: msg.to_string() };
        if offsets.len() < 2 {
            return Err(GraphError::Empty);
        }
        if offsets[0] != 0 || offsets.windows(2).any(|p| p[0] > p[1]) {
            return Err(bad("offsets must start at 0 and be non-decreasing"));
        }
        if *offsets.last().unwrap() != targets.len() || targets.len() != weights.len() {
            return Err(bad("offsets, targets and weights disagree on arc count"));
        }
        let n = offsets.len() - 1;
        if let Some(&t) = targets.iter().find(|&&t| t as usize >= n) {
            return Err(GraphError::IdOutOfRange { id: t as u64, n });
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(bad("weights must be positive and finite"));
        }
        let g = Graph { offsets, targets, weights };
        if !g.is_symmetric() {
            return Err(bad("arcs are not symmetric"));
        }
        Ok(g)
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of stored arcs; both directions of each edge are counted.
    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    #[inline]
    pub fn targets(&self) -> &[Label] {
        &self.targets
    }

    #[inline]
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Number of arcs leaving `i`, self-loop included.
    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    #[inline]
    pub fn neighbor_ids(&self, i: usize) -> &[Label] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn neighbor_weights(&self, i: usize) -> &[Weight] {
        &self.weights[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (Label, Weight)> + '_ {
        self.neighbor_ids(i)
            .iter()
            .copied()
            .zip(self.neighbor_weights(i).iter().copied())
    }

    /// Weighted degree `K_i`: total weight of arcs out of `i`, self-loop
    /// included.
    pub fn weighted_degree(&self, i: usize) -> f64 {
        assert!(i < self.num_vertices(), "vertex {i} out of range");
        self.neighbor_weights(i).iter().map(|&w| w as f64).sum()
    }

    /// Total edge weight `m`: half the total arc weight.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().map(|&w| w as f64).sum::<f64>() / 2.0
    }

    /// Undirected edges `(i, j, w)` with `i <= j`, in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (Label, Label, Weight)> + '_ {
        (0..self.num_vertices()).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| i as Label <= j)
                .map(move |(j, w)| (i as Label, j, w))
        })
    }

    /// True when every arc has a reverse arc of equal weight.
    pub fn is_symmetric(&self) -> bool {
        (0..self.num_vertices()).all(|i| {
            self.neighbors(i).all(|(j, w)| {
                let ids = self.neighbor_ids(j as usize);
                match ids.binary_search(&(i as Label)) {
                    Ok(pos) => self.neighbor_weights(j as usize)[pos] == w,
                    Err(_) => false,
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn path_is_symmetrized() {
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_arcs(), 4);
        assert_eq!(g.offsets(), &[0, 1, 3, 4]);
        assert_eq!(g.targets(), &[1, 0, 2, 1]);
        assert!(g.weights().iter().all(|&w| w == 1.0));
        assert!(g.is_symmetric());
    }

    #[test]
    fn duplicate_edges_sum() {
        let g = Graph::from_edges(2, [(0, 1, 2.0), (1, 0, 3.0)]).unwrap();
        assert_eq!(g.num_arcs(), 2);
        assert_eq!(g.weights(), &[5.0, 5.0]);
    }

    #[test]
    fn self_loops_kept_once() {
        let g = Graph::from_edges(2, [(0, 0, 2.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.neighbor_ids(0), &[0, 1]);
        assert_eq!(g.weighted_degree(0), 3.0);
        // one self arc plus two arcs for the 0-1 edge
        assert_eq!(g.total_weight(), 2.0);
    }

    #[test]
    fn weighted_degree_examples() {
        assert_eq!(triangle().weighted_degree(1), 2.0);
        let iso = Graph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert_eq!(iso.weighted_degree(2), 0.0);
        let star = Graph::from_edges(4, [(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0)]).unwrap();
        assert_eq!(star.weighted_degree(0), 6.0);
    }

    #[test]
    fn total_weight_examples() {
        assert_eq!(triangle().total_weight(), 3.0);
        let empty = Graph::from_edges(4, std::iter::empty()).unwrap();
        assert_eq!(empty.total_weight(), 0.0);
        let two = Graph::from_edges(
            6,
            [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)],
        )
        .unwrap();
        assert_eq!(two.total_weight(), 6.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Graph::from_edges(0, []), Err(GraphError::Empty)));
        assert!(matches!(
            Graph::from_edges(2, [(0, 2, 1.0)]),
            Err(GraphError::IdOutOfRange { id: 2, n: 2 })
        ));
        assert!(Graph::from_edges(2, [(0, 1, 0.0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 1, -1.0)]).is_err());
    }

    #[test]
    fn from_csr_checks_symmetry() {
        let g = triangle();
        let ok = Graph::from_csr(g.offsets().to_vec(), g.targets().to_vec(), g.weights().to_vec());
        assert_eq!(ok.unwrap(), g);
        let lopsided = Graph::from_csr(vec![0, 1, 1], vec![1], vec![1.0]);
        assert!(lopsided.is_err());
    }

    #[test]
    fn edges_lists_each_undirected_edge_once() {
        let e: Vec<_> = triangle().edges().collect();
        assert_eq!(e, vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
    }
}

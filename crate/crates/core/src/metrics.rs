//! Modularity and per-community aggregates.

use crate::graph::Graph;
use crate::Label;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("modularity is undefined for a graph without edges")]
    NoEdges,
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// Per-community totals. Index `c` of every vector refers to `labels[c]`;
/// communities are listed in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityStats {
    pub num_communities: usize,
    pub labels: Vec<Label>,
    pub sizes: Vec<usize>,
    /// Weight of arcs with both ends inside the community, both directions
    /// counted.
    pub internal: Vec<f64>,
    /// Weight of all arcs leaving a community member.
    pub total: Vec<f64>,
}

pub fn community_stats(g: &Graph, labels: &[Label]) -> Result<CommunityStats, MetricsError> {
    let n = g.num_vertices();
    if labels.len() != n {
        return Err(MetricsError::LabelCount { expected: n, got: labels.len() });
    }
    let mut index: HashMap<Label, usize> = HashMap::new();
    let mut stats = CommunityStats {
        num_communities: 0,
        labels: Vec::new(),
        sizes: Vec::new(),
        internal: Vec::new(),
        total: Vec::new(),
    };
    let mut community = Vec::with_capacity(n);
    for &c in labels {
        let idx = *index.entry(c).or_insert_with(|| {
            stats.labels.push(c);
            stats.sizes.push(0);
            stats.internal.push(0.0);
            stats.total.push(0.0);
            stats.labels.len() - 1
        });
        stats.sizes[idx] += 1;
        community.push(idx);
    }
    for i in 0..n {
        let ci = community[i];
        for (j, w) in g.neighbors(i) {
            let w = w as f64;
            stats.total[ci] += w;
            if community[j as usize] == ci {
                stats.internal[ci] += w;
            }
        }
    }
    stats.num_communities = stats.labels.len();
    Ok(stats)
}

/// Modularity `Q = Σ_c [σ_c/2m − (Σ_c/2m)²]`, accumulated in `f64`.
pub fn modularity(g: &Graph, labels: &[Label]) -> Result<f64, MetricsError> {
    let two_m = 2.0 * g.total_weight();
    if two_m <= 0.0 {
        return Err(MetricsError::NoEdges);
    }
    let stats = community_stats(g, labels)?;
    Ok(stats
        .internal
        .iter()
        .zip(&stats.total)
        .map(|(&sigma, &tot)| sigma / two_m - (tot / two_m).powi(2))
        .sum())
}

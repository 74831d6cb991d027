//! Label propagation community detection with fixed-size neighborhood
//! sketches.
//!
//! The engine picks each vertex's new label from its neighbors' labels
//! using one of three selectors:
//!
//! * an exact per-worker label→weight map (the baseline),
//! * a single weighted Boyer-Moore vote,
//! * a `k`-slot weighted Misra-Gries sketch.
//!
//! The last two need no per-vertex or per-worker `O(N)` table, so the
//! auxiliary working set stays `O(N)` overall regardless of edge count.
//!
//! ```
//! use sketchlpa::{Graph, LpaConfig, Variant, lpa_run, modularity};
//!
//! let g = Graph::from_edges(6, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
//!                               (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]).unwrap();
//! let cfg = LpaConfig { variant: Variant::Mg, ..LpaConfig::default() };
//! let res = lpa_run(&g, &cfg).unwrap();
//! assert_eq!(res.labels, vec![0, 0, 0, 3, 3, 3]);
//! assert!((modularity(&g, &res.labels).unwrap() - 0.5).abs() < 1e-12);
//! ```

pub mod generate;
pub mod graph;
pub mod lpa;
pub mod metrics;
pub mod sketch;

pub use graph::{Graph, GraphError, GraphFormat};
pub use lpa::{
    aux_memory_estimate, lpa_move, lpa_run, lpa_run_observed, ConfigError, IterationEvent,
    LpaConfig, LpaResult, LpaState, ScanMode, Variant, VertexOrder,
};
pub use metrics::{community_stats, modularity, CommunityStats, MetricsError};
pub use sketch::{bm_reduce, BmState, MgSketch, SketchError, UpdateRule};

/// Community label. Labels are seeded from vertex ids, so every label is a
/// valid vertex id.
pub type Label = u32;

/// Edge weight and sketch residual type.
#[cfg(not(feature = "f64-weights"))]
pub type Weight = f32;

/// Edge weight and sketch residual type.
#[cfg(feature = "f64-weights")]
pub type Weight = f64;

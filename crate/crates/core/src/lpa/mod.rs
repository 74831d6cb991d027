//! The label-propagation engine.
//!
//! Every vertex starts in its own community (`C[i] = i`). Each iteration
//! visits the unprocessed vertices, picks the neighbor label with the most
//! connecting weight (exactly, or approximately through a sketch), and
//! adopts it. A vertex that changes label re-marks its neighbors for the
//! next visit. Every `pickless_gap`-th iteration, starting with the first,
//! only moves to a smaller label are allowed, which breaks symmetric label
//! swaps. The run stops once a non-pick-less iteration changes fewer than
//! `tolerance * N` labels, or after `max_iterations`.
//!
//! Label reads are asynchronous: a vertex sees labels its neighbors adopted
//! earlier in the same iteration.

mod config;
mod engine;
mod select;

pub use config::{ConfigError, LpaConfig, ScanMode, Variant, VertexOrder};
pub use engine::{
    aux_memory_estimate, lpa_move, lpa_run, lpa_run_observed, IterationEvent, LpaResult, LpaState,
};
pub use select::{select_label_bm, select_label_exact, select_label_mg, LabelRead, Selector};

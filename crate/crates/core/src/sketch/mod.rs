//! Fixed-size neighborhood summaries: a weighted Misra-Gries sketch and a
//! weighted Boyer-Moore vote.
//!
//! # Shared-mode contract
//!
//! A sketch is normally owned by one worker. When several workers feed one
//! sketch (the shared-sketch option of the engine), each accumulate must
//! act atomically with respect to slot emptiness: a worker that finds a
//! free slot and loses the race to reserve it retries the whole lookup.
//! Any such execution is equivalent to some sequential interleaving of the
//! individual accumulates, so the sequential methods here are the
//! linearized specification. [`MgSketch::accumulate_interleaved`] replays
//! one such interleaving (round-robin over the worker streams)
//! deterministically.

mod bm;
mod mg;

pub use bm::{bm_reduce, BmState};
pub use mg::{AccumulateOutcome, MgSketch, EMPTY_KEY};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SketchError {
    #[error("cannot merge a {src}-slot sketch into a {dst}-slot sketch")]
    SlotMismatch { dst: usize, src: usize },
    #[error("cannot reduce an empty list of votes")]
    EmptyReduce,
}

/// How a sketch absorbs weight it cannot credit to a matching label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateRule {
    /// Misra-Gries: when every slot is occupied, subtract
    /// `d = min(w, smallest residual)` from all slots and place the
    /// remaining `w - d` in the slot that just emptied.
    /// Boyer-Moore: a rival of weight `w` cancels `min(w, w#)`; if it
    /// outweighs the candidate it takes over with the surplus.
    ///
    /// Both keep their streaming guarantees under arbitrary positive
    /// weights.
    #[default]
    Guaranteed,
    /// Misra-Gries: subtract the full `w` from every slot, clamped at zero,
    /// and drop the arriving label.
    /// Boyer-Moore: a rival that is not strictly outweighed replaces the
    /// candidate with its full weight.
    ///
    /// Cheaper bookkeeping; identical to `Guaranteed` for Misra-Gries on
    /// unit weights, but neither guarantee survives mixed weights.
    Simple,
}

impl std::str::FromStr for UpdateRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "guaranteed" => Ok(UpdateRule::Guaranteed),
            "simple" => Ok(UpdateRule::Simple),
            other => Err(format!("unknown update rule `{other}` (expected guaranteed or simple)")),
        }
    }
}

impl std::fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UpdateRule::Guaranteed => "guaranteed",
            UpdateRule::Simple => "simple",
        })
    }
}

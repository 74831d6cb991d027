use crate::sketch::UpdateRule;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Exact label→weight map per worker.
    Exact,
    /// Weighted Boyer-Moore vote.
    Bm,
    /// Weighted Misra-Gries sketch.
    Mg,
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Variant::Exact),
            "bm" => Ok(Variant::Bm),
            "mg" => Ok(Variant::Mg),
            other => Err(format!("unknown variant `{other}` (expected exact, bm or mg)")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Exact => "exact",
            Variant::Bm => "bm",
            Variant::Mg => "mg",
        })
    }
}

/// How the Misra-Gries selector turns a sketch into a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// Take the label with the largest residual.
    #[default]
    Single,
    /// Re-weigh the sketch's candidates exactly with a second pass over the
    /// neighbors, then take the heaviest.
    Double,
}

impl FromStr for ScanMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(ScanMode::Single),
            "double" => Ok(ScanMode::Double),
            other => Err(format!("unknown scan mode `{other}` (expected single or double)")),
        }
    }
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanMode::Single => "single",
            ScanMode::Double => "double",
        })
    }
}

/// Order in which vertices are visited within an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum VertexOrder {
    #[default]
    Ascending,
    /// Fixed pseudo-random permutation derived from the seed.
    Shuffled(u64),
}

impl FromStr for VertexOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ascending" {
            return Ok(VertexOrder::Ascending);
        }
        match s.strip_prefix("shuffled:").map(str::parse::<u64>) {
            Some(Ok(seed)) => Ok(VertexOrder::Shuffled(seed)),
            _ => Err(format!("bad vertex order `{s}` (expected ascending or shuffled:SEED)")),
        }
    }
}

impl fmt::Display for VertexOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexOrder::Ascending => f.write_str("ascending"),
            VertexOrder::Shuffled(seed) => write!(f, "shuffled:{seed}"),
        }
    }
}

impl From<VertexOrder> for String {
    fn from(o: VertexOrder) -> String {
        o.to_string()
    }
}

impl TryFrom<String> for VertexOrder {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{name} must be at least 1, got {value}")]
    TooSmall { name: &'static str, value: usize },
    #[error("tolerance must lie strictly between 0 and 1, got {0}")]
    Tolerance(f64),
}

/// Run parameters. Defaults: 8 sketch slots, pick-less every 8 iterations,
/// tolerance 0.05, 20 iterations, degree threshold 128, 32 partial groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpaConfig {
    pub variant: Variant,
    pub scan_mode: ScanMode,
    pub sketch_slots: usize,
    pub pickless_gap: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Vertices with at least this many arcs are split across
    /// `partial_groups` contiguous adjacency chunks.
    pub degree_threshold: usize,
    pub partial_groups: usize,
    /// 0 runs sequentially and deterministically.
    pub worker_count: usize,
    /// High-degree Misra-Gries vertices feed one shared sketch instead of
    /// merging per-chunk sketches.
    pub shared_sketch: bool,
    pub update_rule: UpdateRule,
    pub vertex_order: VertexOrder,
}

impl Default for LpaConfig {
    fn default() -> Self {
        LpaConfig {
            variant: Variant::Mg,
            scan_mode: ScanMode::Single,
            sketch_slots: 8,
            pickless_gap: 8,
            tolerance: 0.05,
            max_iterations: 20,
            degree_threshold: 128,
            partial_groups: 32,
            worker_count: 0,
            shared_sketch: false,
            update_rule: UpdateRule::Guaranteed,
            vertex_order: VertexOrder::Ascending,
        }
    }
}

impl LpaConfig {
    pub fn with_variant(variant: Variant) -> Self {
        LpaConfig { variant, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("sketch_slots", self.sketch_slots),
            ("pickless_gap", self.pickless_gap),
            ("max_iterations", self.max_iterations),
            ("degree_threshold", self.degree_threshold),
            ("partial_groups", self.partial_groups),
        ];
        for (name, value) in positive {
            if value < 1 {
                return Err(ConfigError::TooSmall { name, value });
            }
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(ConfigError::Tolerance(self.tolerance));
        }
        Ok(())
    }
}

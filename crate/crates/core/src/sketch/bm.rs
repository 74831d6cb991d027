use super::{SketchError, UpdateRule};
use crate::{Label, Weight};

/// Weighted Boyer-Moore vote: one candidate label and its surplus weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmState {
    pub candidate: Label,
    pub weight: Weight,
}

impl BmState {
    pub fn new(candidate: Label) -> Self {
        BmState { candidate, weight: 0.0 }
    }

    pub fn accumulate(&mut self, c: Label, w: Weight) {
        self.accumulate_with(c, w, UpdateRule::Guaranteed);
    }

    pub fn accumulate_with(&mut self, c: Label, w: Weight, rule: UpdateRule) {
        debug_assert!(w > 0.0, "vote weight must be positive");
        if c == self.candidate {
            self.weight += w;
            return;
        }
        match rule {
            UpdateRule::Guaranteed => {
                if self.weight >= w {
                    self.weight -= w;
                } else {
                    self.candidate = c;
                    self.weight = w - self.weight;
                }
            }
            UpdateRule::Simple => {
                if self.weight > w {
                    self.weight -= w;
                } else {
                    self.candidate = c;
                    self.weight = w;
                }
            }
        }
    }
}

/// Combines partial votes by taking the heaviest one (ties to the smaller
/// candidate). This is a heuristic: it is not an exact merge of the
/// underlying streams.
pub fn bm_reduce(parts: &[BmState]) -> Result<BmState, SketchError> {
    parts
        .iter()
        .copied()
        .reduce(|best, p| {
            if p.weight > best.weight || (p.weight == best.weight && p.candidate < best.candidate) {
                p
            } else {
                best
            }
        })
        .ok_or(SketchError::EmptyReduce)
}

use super::{SketchError, UpdateRule};
use crate::{Label, Weight};

/// Key stored in slots that have never held a label since the last clear.
pub const EMPTY_KEY: Label = Label::MAX;

/// What a single [`MgSketch::accumulate`] did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccumulateOutcome {
    /// Slot already keyed by the label; its residual grew.
    Incremented(usize),
    /// Label placed in a free slot.
    Inserted(usize),
    /// No match and no free slot: residuals were decremented. Under
    /// [`UpdateRule::Guaranteed`] the leftover weight, if any, went to the
    /// returned slot.
    Decremented(Option<usize>),
}

/// Weighted Misra-Gries sketch with `k` slots.
///
/// A slot is empty exactly when its residual is zero; residuals never go
/// negative. Keys of empty slots may be stale and are ignored by
/// [`max_key`](Self::max_key) and [`entries`](Self::entries).
#[derive(Debug, Clone, PartialEq)]
pub struct MgSketch {
    keys: Vec<Label>,
    values: Vec<Weight>,
    rule: UpdateRule,
}

impl MgSketch {
    pub fn new(k: usize) -> Self {
        Self::with_rule(k, UpdateRule::Guaranteed)
    }

    pub fn with_rule(k: usize, rule: UpdateRule) -> Self {
        assert!(k >= 1, "a sketch needs at least one slot");
        MgSketch { keys: vec![EMPTY_KEY; k], values: vec![0.0; k], rule }
    }

    /// Builds a sketch holding `entries` in slots `0..entries.len()`.
    pub fn from_entries(k: usize, rule: UpdateRule, entries: &[(Label, Weight)]) -> Self {
        assert!(entries.len() <= k);
        let mut s = Self::with_rule(k, rule);
        for (slot, &(c, w)) in entries.iter().enumerate() {
            assert!(w >= 0.0);
            s.keys[slot] = c;
            s.values[slot] = w;
        }
        s
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.keys.len()
    }

    pub fn rule(&self) -> UpdateRule {
        self.rule
    }

    pub fn keys(&self) -> &[Label] {
        &self.keys
    }

    pub fn values(&self) -> &[Weight] {
        &self.values
    }

    /// Non-empty `(label, residual)` pairs in slot order.
    pub fn entries(&self) -> impl Iterator<Item = (Label, Weight)> + '_ {
        self.keys
            .iter()
            .zip(&self.values)
            .filter(|(_, &v)| v > 0.0)
            .map(|(&c, &v)| (c, v))
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Empties every slot.
    pub fn clear(&mut self) {
        self.keys.fill(EMPTY_KEY);
        self.values.fill(0.0);
    }

    /// Zeroes residuals but keeps keys, so the candidates can be re-weighed
    /// exactly with [`rescan_add`](Self::rescan_add).
    pub fn clear_values(&mut self) {
        self.values.fill(0.0);
    }

    #[inline]
    fn first_free(&self) -> Option<usize> {
        self.values.iter().position(|&v| v == 0.0)
    }

    pub fn accumulate(&mut self, c: Label, w: Weight) -> AccumulateOutcome {
        debug_assert!(w > 0.0, "accumulated weight must be positive");
        if let Some(s) = self.keys.iter().position(|&key| key == c) {
            self.values[s] += w;
            return AccumulateOutcome::Incremented(s);
        }
        if let Some(s) = self.first_free() {
            self.keys[s] = c;
            self.values[s] = w;
            return AccumulateOutcome::Inserted(s);
        }
        match self.rule {
            UpdateRule::Simple => {
                for v in &mut self.values {
                    *v = (*v - w).max(0.0);
                }
                AccumulateOutcome::Decremented(None)
            }
            UpdateRule::Guaranteed => {
                let floor = self.values.iter().copied().fold(Weight::INFINITY, Weight::min);
                let d = floor.min(w);
                for v in &mut self.values {
                    *v = (*v - d).max(0.0);
                }
                let rest = w - d;
                if rest > 0.0 {
                    // the smallest slot just hit zero
                    let s = self.first_free().expect("minimum slot was emptied");
                    self.keys[s] = c;
                    self.values[s] = rest;
                    AccumulateOutcome::Decremented(Some(s))
                } else {
                    AccumulateOutcome::Decremented(None)
                }
            }
        }
    }

    /// Feeds every non-empty slot of `src`, in slot order, through
    /// [`accumulate`](Self::accumulate).
    pub fn merge_from(&mut self, src: &MgSketch) -> Result<(), SketchError> {
        if src.k() != self.k() {
            return Err(SketchError::SlotMismatch { dst: self.k(), src: src.k() });
        }
        for s in 0..src.k() {
            let w = src.values[s];
            if w > 0.0 {
                self.accumulate(src.keys[s], w);
            }
        }
        Ok(())
    }

    /// Label with the largest residual, ties to the smaller label; `None`
    /// when every slot is empty.
    pub fn max_key(&self) -> Option<Label> {
        let mut best: Option<(Label, Weight)> = None;
        for (c, v) in self.entries() {
            best = match best {
                Some((bc, bv)) if bv > v || (bv == v && bc < c) => Some((bc, bv)),
                _ => Some((c, v)),
            };
        }
        best.map(|(c, _)| c)
    }

    /// Adds `w` to the slot keyed by `c`; labels outside the candidate set
    /// are ignored.
    pub fn rescan_add(&mut self, c: Label, w: Weight) {
        if let Some(s) = self.keys.iter().position(|&key| key == c) {
            self.values[s] += w;
        }
    }

    /// Accumulates several streams into this one sketch as if each stream
    /// were fed by its own worker, interleaving them round-robin.
    pub fn accumulate_interleaved<I>(&mut self, streams: impl IntoIterator<Item = I>)
    where
        I: Iterator<Item = (Label, Weight)>,
    {
        let mut streams: Vec<I> = streams.into_iter().collect();
        let mut live = streams.len();
        while live > 0 {
            live = 0;
            for it in &mut streams {
                if let Some((c, w)) = it.next() {
                    self.accumulate(c, w);
                    live += 1;
                }
            }
        }
    }
}

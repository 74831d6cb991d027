//! Per-vertex label selection: exact, Boyer-Moore and Misra-Gries.

use super::config::{LpaConfig, ScanMode, Variant};
use crate::graph::Graph;
use crate::sketch::{bm_reduce, BmState, MgSketch, UpdateRule};
use crate::{Label, Weight};
use std::mem::size_of;
use std::ops::Range;
use std::sync::atomic::{AtomicU32, Ordering};

/// Read access to a label array, plain or atomic.
pub trait LabelRead {
    fn label(&self, i: usize) -> Label;
}

impl LabelRead for [Label] {
    #[inline]
    fn label(&self, i: usize) -> Label {
        self[i]
    }
}

impl LabelRead for Vec<Label> {
    #[inline]
    fn label(&self, i: usize) -> Label {
        self[i]
    }
}

impl LabelRead for [AtomicU32] {
    #[inline]
    fn label(&self, i: usize) -> Label {
        self[i].load(Ordering::Relaxed)
    }
}

/// `part`-th of `parts` contiguous, near-equal slices of `0..len`.
#[inline]
pub(crate) fn chunk(len: usize, parts: usize, part: usize) -> Range<usize> {
    (part * len / parts)..((part + 1) * len / parts)
}

/// Dense label→weight map sized to the vertex count, reset in time
/// proportional to the labels touched.
#[derive(Debug, Clone)]
struct ExactMap {
    weights: Vec<Weight>,
    touched: Vec<Label>,
}

impl ExactMap {
    fn new(n: usize) -> Self {
        ExactMap { weights: vec![0.0; n], touched: Vec::with_capacity(n) }
    }

    fn add(&mut self, c: Label, w: Weight) {
        let slot = &mut self.weights[c as usize];
        if *slot == 0.0 {
            self.touched.push(c);
        }
        *slot += w;
    }

    /// Heaviest label (ties to the smaller one), then resets the map.
    fn take_best(&mut self) -> Option<Label> {
        let mut best: Option<(Label, Weight)> = None;
        for &c in &self.touched {
            let w = self.weights[c as usize];
            best = match best {
                Some((bc, bw)) if bw > w || (bw == w && bc < c) => Some((bc, bw)),
                _ => Some((c, w)),
            };
            self.weights[c as usize] = 0.0;
        }
        self.touched.clear();
        best.map(|(c, _)| c)
    }
}

/// Reusable per-worker scratch for one selection strategy.
#[derive(Debug, Clone)]
pub struct Selector {
    variant: Variant,
    scan_mode: ScanMode,
    degree_threshold: usize,
    groups: usize,
    shared_sketch: bool,
    rule: UpdateRule,
    exact: Option<ExactMap>,
    sketches: Vec<MgSketch>,
    votes: Vec<BmState>,
}

impl Selector {
    pub fn new(cfg: &LpaConfig, num_vertices: usize) -> Self {
        let groups = cfg.partial_groups;
        let (exact, sketches, votes) = match cfg.variant {
            Variant::Exact => (Some(ExactMap::new(num_vertices)), Vec::new(), Vec::new()),
            Variant::Mg => {
                let count = if cfg.shared_sketch { 1 } else { groups };
                let s = MgSketch::with_rule(cfg.sketch_slots, cfg.update_rule);
                (None, vec![s; count], Vec::new())
            }
            Variant::Bm => (None, Vec::new(), vec![BmState::new(0); groups]),
        };
        Selector {
            variant: cfg.variant,
            scan_mode: cfg.scan_mode,
            degree_threshold: cfg.degree_threshold,
            groups,
            shared_sketch: cfg.shared_sketch,
            rule: cfg.update_rule,
            exact,
            sketches,
            votes,
        }
    }

    /// Bytes of working memory this selector holds.
    pub fn scratch_bytes(variant: Variant, cfg: &LpaConfig, num_vertices: usize) -> usize {
        let label = size_of::<Label>();
        let weight = size_of::<Weight>();
        match variant {
            Variant::Exact => num_vertices * (weight + label),
            Variant::Mg => {
                let count = if cfg.shared_sketch { 1 } else { cfg.partial_groups };
                count * cfg.sketch_slots * (label + weight)
            }
            Variant::Bm => cfg.partial_groups * (label + weight),
        }
    }

    /// Actual heap footprint of the scratch buffers.
    pub fn heap_bytes(&self) -> usize {
        let label = size_of::<Label>();
        let weight = size_of::<Weight>();
        let exact = self
            .exact
            .as_ref()
            .map_or(0, |m| m.weights.capacity() * weight + m.touched.capacity() * label);
        let sketches: usize = self.sketches.iter().map(|s| s.k() * (label + weight)).sum();
        exact + sketches + self.votes.capacity() * (label + weight)
    }

    pub fn select<L: LabelRead + ?Sized>(&mut self, g: &Graph, labels: &L, i: usize) -> Label {
        match self.variant {
            Variant::Exact => self.select_exact(g, labels, i),
            Variant::Bm => self.select_bm(g, labels, i),
            Variant::Mg => self.select_mg(g, labels, i),
        }
    }

    fn select_exact<L: LabelRead + ?Sized>(&mut self, g: &Graph, labels: &L, i: usize) -> Label {
        let map = self.exact.as_mut().expect("exact selector");
        for (j, w) in g.neighbors(i) {
            if j as usize != i {
                map.add(labels.label(j as usize), w);
            }
        }
        map.take_best().unwrap_or_else(|| labels.label(i))
    }

    fn select_bm<L: LabelRead + ?Sized>(&mut self, g: &Graph, labels: &L, i: usize) -> Label {
        let current = labels.label(i);
        let ids = g.neighbor_ids(i);
        let ws = g.neighbor_weights(i);
        let rule = self.rule;
        let vote = |range: Range<usize>| {
            let mut st = BmState::new(current);
            for t in range {
                let j = ids[t] as usize;
                if j != i {
                    st.accumulate_with(labels.label(j), ws[t], rule);
                }
            }
            st
        };
        if ids.len() < self.degree_threshold {
            return vote(0..ids.len()).candidate;
        }
        for part in 0..self.groups {
            self.votes[part] = vote(chunk(ids.len(), self.groups, part));
        }
        bm_reduce(&self.votes).expect("at least one group").candidate
    }

    fn select_mg<L: LabelRead + ?Sized>(&mut self, g: &Graph, labels: &L, i: usize) -> Label {
        let ids = g.neighbor_ids(i);
        let ws = g.neighbor_weights(i);
        let stream = |range: Range<usize>| {
            range.filter_map(move |t| {
                let j = ids[t] as usize;
                (j != i).then(|| (labels.label(j), ws[t]))
            })
        };

        if ids.len() < self.degree_threshold {
            let s = &mut self.sketches[0];
            s.clear();
            for (c, w) in stream(0..ids.len()) {
                s.accumulate(c, w);
            }
        } else if self.shared_sketch {
            let s = &mut self.sketches[0];
            s.clear();
            s.accumulate_interleaved((0..self.groups).map(|p| stream(chunk(ids.len(), self.groups, p))));
        } else {
            for (part, s) in self.sketches.iter_mut().enumerate() {
                s.clear();
                for (c, w) in stream(chunk(ids.len(), self.groups, part)) {
                    s.accumulate(c, w);
                }
            }
            let (head, rest) = self.sketches.split_at_mut(1);
            for partial in rest.iter() {
                head[0].merge_from(partial).expect("same slot count");
            }
        }

        let s = &mut self.sketches[0];
        if self.scan_mode == ScanMode::Double {
            s.clear_values();
            for (c, w) in stream(0..ids.len()) {
                s.rescan_add(c, w);
            }
        }
        s.max_key().unwrap_or_else(|| labels.label(i))
    }
}

/// Exact selector: the neighbor label with the largest total connecting
/// weight, ties to the smaller label; keeps the current label when `i` has
/// no neighbors other than itself.
pub fn select_label_exact<L: LabelRead + ?Sized>(g: &Graph, labels: &L, i: usize) -> Label {
    let cfg = LpaConfig::with_variant(Variant::Exact);
    Selector::new(&cfg, g.num_vertices()).select(g, labels, i)
}

/// Boyer-Moore selector, using `cfg`'s degree threshold, group count and
/// update rule.
pub fn select_label_bm<L: LabelRead + ?Sized>(
    g: &Graph,
    labels: &L,
    i: usize,
    cfg: &LpaConfig,
) -> Label {
    let cfg = LpaConfig { variant: Variant::Bm, ..cfg.clone() };
    Selector::new(&cfg, g.num_vertices()).select(g, labels, i)
}

/// Misra-Gries selector, using `cfg`'s slots, scan mode, threshold, group
/// count, shared-sketch flag and update rule.
pub fn select_label_mg<L: LabelRead + ?Sized>(
    g: &Graph,
    labels: &L,
    i: usize,
    cfg: &LpaConfig,
) -> Label {
    let cfg = LpaConfig { variant: Variant::Mg, ..cfg.clone() };
    Selector::new(&cfg, g.num_vertices()).select(g, labels, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(center_labels: &[(Label, Weight)]) -> (Graph, Vec<Label>) {
        // vertex 0 is the center; leaf t+1 carries label center_labels[t].0
        let max_label = center_labels.iter().map(|&(c, _)| c as usize).max().unwrap_or(0);
        let n = (center_labels.len() + 1).max(max_label + 1);
        let edges = center_labels
            .iter()
            .enumerate()
            .map(|(t, &(_, w))| (0, t as Label + 1, w));
        let g = Graph::from_edges(n, edges).unwrap();
        let mut labels = vec![0; n];
        for (t, &(c, _)) in center_labels.iter().enumerate() {
            labels[t + 1] = c;
        }
        (g, labels)
    }

    #[test]
    fn chunks_cover_range() {
        let parts: Vec<_> = (0..3).map(|p| chunk(10, 3, p)).collect();
        assert_eq!(parts, vec![0..3, 3..6, 6..10]);
        assert_eq!(chunk(2, 4, 0), 0..0);
        assert_eq!(chunk(2, 4, 3), 1..2);
    }

    #[test]
    fn exact_examples() {
        let (g, mut labels) = star(&[(5, 1.0), (5, 1.0), (9, 1.5)]);
        labels[0] = 0;
        assert_eq!(select_label_exact(&g, &labels, 0), 5);
        let (g, labels) = star(&[(9, 1.0), (5, 1.0)]);
        assert_eq!(select_label_exact(&g, labels.as_slice(), 0), 5);
    }

    #[test]
    fn isolated_or_self_loop_keeps_label() {
        let g = Graph::from_edges(3, [(1, 1, 2.0)]).unwrap();
        let labels = vec![2, 1, 0];
        let cfg = LpaConfig::default();
        for i in 0..3 {
            assert_eq!(select_label_exact(&g, &labels, i), labels[i]);
            assert_eq!(select_label_bm(&g, &labels, i, &cfg), labels[i]);
            assert_eq!(select_label_mg(&g, &labels, i, &cfg), labels[i]);
        }
    }

    #[test]
    fn self_loop_is_skipped() {
        // heavy self-loop on 0 must not vote for 0's own label
        let g = Graph::from_edges(2, [(0, 0, 10.0), (0, 1, 1.0)]).unwrap();
        let labels = vec![0, 1];
        let cfg = LpaConfig::default();
        assert_eq!(select_label_exact(&g, &labels, 0), 1);
        assert_eq!(select_label_bm(&g, &labels, 0, &cfg), 1);
        assert_eq!(select_label_mg(&g, &labels, 0, &cfg), 1);
    }

    #[test]
    fn bm_low_degree_trace() {
        let (g, labels) = star(&[(1, 1.0), (1, 1.0), (2, 1.0)]);
        assert_eq!(select_label_bm(&g, &labels, 0, &LpaConfig::default()), 1);
    }

    #[test]
    fn bm_high_degree_unanimous() {
        let cfg = LpaConfig { degree_threshold: 4, partial_groups: 3, ..LpaConfig::default() };
        let (g, labels) = star(&[(4, 1.0); 8]);
        assert_eq!(select_label_bm(&g, &labels, 0, &cfg), 4);
    }

    #[test]
    fn mg_fits_in_sketch() {
        let (g, labels) = star(&[(5, 3.0), (9, 1.0)]);
        let cfg = LpaConfig::default();
        assert_eq!(select_label_mg(&g, &labels, 0, &cfg), 5);
        let double = LpaConfig { scan_mode: ScanMode::Double, ..cfg };
        assert_eq!(select_label_mg(&g, &labels, 0, &double), 5);
    }

    #[test]
    fn mg_high_degree_paths_agree_when_lossless() {
        let leaves: Vec<(Label, Weight)> =
            (0..40).map(|t| ((t % 3) as Label + 1, if t % 3 == 2 { 2.0 } else { 1.0 })).collect();
        let (g, labels) = star(&leaves);
        let base = LpaConfig { degree_threshold: 8, partial_groups: 5, ..LpaConfig::default() };
        let expected = select_label_exact(&g, &labels, 0);
        assert_eq!(expected, 3);
        for shared in [false, true] {
            for scan in [ScanMode::Single, ScanMode::Double] {
                let cfg = LpaConfig { shared_sketch: shared, scan_mode: scan, ..base.clone() };
                assert_eq!(select_label_mg(&g, &labels, 0, &cfg), expected);
            }
        }
    }

    #[test]
    fn selector_scratch_matches_formula() {
        for variant in [Variant::Exact, Variant::Bm, Variant::Mg] {
            for shared in [false, true] {
                let cfg = LpaConfig { variant, shared_sketch: shared, ..LpaConfig::default() };
                let s = Selector::new(&cfg, 100);
                assert_eq!(s.heap_bytes(), Selector::scratch_bytes(variant, &cfg, 100));
            }
        }
    }
}

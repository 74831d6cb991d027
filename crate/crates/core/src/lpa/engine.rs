use super::config::{ConfigError, LpaConfig, VertexOrder};
use super::select::Selector;
use crate::graph::Graph;
use crate::Label;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::mem::size_of;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicUsize, Ordering};
use std::thread;

/// Vertices handed to a parallel worker per grab.
const WORK_CHUNK: usize = 256;

/// Mutable engine state: the label array and the per-vertex processed
/// flags. Both are atomics so parallel workers can read and write
/// individual entries without tearing.
#[derive(Debug)]
pub struct LpaState {
    labels: Vec<AtomicU32>,
    processed: Vec<AtomicBool>,
}

impl LpaState {
    /// Singleton labels `C[i] = i`, every vertex unprocessed.
    pub fn new(n: usize) -> Self {
        Self::from_labels((0..n as Label).collect())
    }

    /// Starts from given labels with every vertex unprocessed.
    pub fn from_labels(labels: Vec<Label>) -> Self {
        let processed = labels.iter().map(|_| AtomicBool::new(false)).collect();
        LpaState { labels: labels.into_iter().map(AtomicU32::new).collect(), processed }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.labels.iter().map(|l| l.load(Ordering::Relaxed)).collect()
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i].load(Ordering::Relaxed)
    }

    pub fn is_processed(&self, i: usize) -> bool {
        self.processed[i].load(Ordering::Relaxed)
    }

    pub fn mark_all_unprocessed(&self) {
        for p in &self.processed {
            p.store(false, Ordering::Relaxed);
        }
    }

    /// Evaluates vertex `i` if it is unprocessed; returns whether its label
    /// changed.
    fn visit(&self, g: &Graph, sel: &mut Selector, i: usize, pickless: bool) -> bool {
        if self.processed[i].swap(true, Ordering::Relaxed) {
            return false;
        }
        let cand = sel.select(g, self.labels.as_slice(), i);
        let cur = self.labels[i].load(Ordering::Relaxed);
        if cand == cur || (pickless && cand > cur) {
            return false;
        }
        self.labels[i].store(cand, Ordering::Relaxed);
        for &j in g.neighbor_ids(i) {
            self.processed[j as usize].store(false, Ordering::Relaxed);
        }
        true
    }
}

/// Per-iteration record passed to [`lpa_run_observed`].
#[derive(Debug)]
pub struct IterationEvent<'a> {
    pub iteration: usize,
    pub pickless: bool,
    pub changed: usize,
    pub before: &'a [Label],
    pub after: &'a [Label],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpaResult {
    pub labels: Vec<Label>,
    pub iterations: usize,
    /// Changed-vertex count of each iteration.
    pub delta_history: Vec<usize>,
    pub converged: bool,
    pub aux_bytes: usize,
}

pub(crate) struct Engine<'g> {
    graph: &'g Graph,
    order: Option<Vec<Label>>,
    selectors: Vec<Selector>,
    parallel: bool,
}

impl<'g> Engine<'g> {
    pub(crate) fn new(graph: &'g Graph, cfg: &LpaConfig) -> Self {
        let n = graph.num_vertices();
        let order = match cfg.vertex_order {
            VertexOrder::Ascending => None,
            VertexOrder::Shuffled(seed) => {
                let mut o: Vec<Label> = (0..n as Label).collect();
                o.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                Some(o)
            }
        };
        let workers = cfg.worker_count.max(1);
        let selectors = (0..workers).map(|_| Selector::new(cfg, n)).collect();
        Engine { graph, order, selectors, parallel: cfg.worker_count > 0 }
    }

    #[inline]
    fn vertex_at(&self, pos: usize) -> usize {
        match &self.order {
            Some(o) => o[pos] as usize,
            None => pos,
        }
    }

    pub(crate) fn run_move(&mut self, state: &LpaState, pickless: bool) -> usize {
        let g = self.graph;
        let n = g.num_vertices();
        assert_eq!(state.len(), n, "state size must match the graph");
        if !self.parallel {
            let mut sel = self.selectors.pop().expect("one selector");
            let mut changed = 0;
            for pos in 0..n {
                if state.visit(g, &mut sel, self.vertex_at(pos), pickless) {
                    changed += 1;
                }
            }
            self.selectors.push(sel);
            return changed;
        }

        let cursor = AtomicUsize::new(0);
        let changed = AtomicUsize::new(0);
        let order = self.order.as_deref();
        let mut selectors = std::mem::take(&mut self.selectors);
        thread::scope(|scope| {
            for sel in selectors.iter_mut() {
                let (cursor, changed) = (&cursor, &changed);
                scope.spawn(move || {
                    let mut local = 0;
                    loop {
                        let start = cursor.fetch_add(WORK_CHUNK, Ordering::Relaxed);
                        if start >= n {
                            break;
                        }
                        for pos in start..(start + WORK_CHUNK).min(n) {
                            if state.visit(g, sel, order.map_or(pos, |o| o[pos] as usize), pickless) {
                                local += 1;
                            }
                        }
                    }
                    changed.fetch_add(local, Ordering::Relaxed);
                });
            }
        });
        self.selectors = selectors;
        changed.into_inner()
    }
}

/// One label-propagation sweep over every unprocessed vertex. In pick-less
/// mode a vertex may only move to a smaller label. Returns the number of
/// vertices whose label changed.
pub fn lpa_move(g: &Graph, state: &LpaState, cfg: &LpaConfig, pickless: bool) -> usize {
    Engine::new(g, cfg).run_move(state, pickless)
}

pub fn lpa_run(g: &Graph, cfg: &LpaConfig) -> Result<LpaResult, ConfigError> {
    run(g, cfg, None)
}

/// Like [`lpa_run`], calling `observer` after every iteration with the
/// labels before and after it.
pub fn lpa_run_observed(
    g: &Graph,
    cfg: &LpaConfig,
    observer: &mut dyn FnMut(&IterationEvent<'_>),
) -> Result<LpaResult, ConfigError> {
    run(g, cfg, Some(observer))
}

fn run(
    g: &Graph,
    cfg: &LpaConfig,
    mut observer: Option<&mut dyn FnMut(&IterationEvent<'_>)>,
) -> Result<LpaResult, ConfigError> {
    cfg.validate()?;
    let n = g.num_vertices();
    let state = LpaState::new(n);
    let mut engine = Engine::new(g, cfg);
    let mut delta_history = Vec::new();
    let mut converged = false;

    for iteration in 0..cfg.max_iterations {
        let pickless = iteration % cfg.pickless_gap == 0;
        let before = observer.as_ref().map(|_| state.labels());
        let changed = engine.run_move(&state, pickless);
        delta_history.push(changed);
        if let (Some(obs), Some(before)) = (observer.as_mut(), before) {
            let after = state.labels();
            obs(&IterationEvent { iteration, pickless, changed, before: &before, after: &after });
        }
        if !pickless && (changed as f64) / (n as f64) < cfg.tolerance {
            converged = true;
            break;
        }
    }

    Ok(LpaResult {
        labels: state.labels(),
        iterations: delta_history.len(),
        delta_history,
        converged,
        aux_bytes: aux_memory_estimate(g, cfg),
    })
}

/// Bytes of auxiliary memory a run allocates, excluding the graph: the
/// label array, processed flags, the visit order when shuffled, and one
/// selector scratch per worker.
///
/// Only the exact variant has an `N`-sized per-worker term; the sketch
/// variants are `O(N)` in total and independent of the arc count.
pub fn aux_memory_estimate(g: &Graph, cfg: &LpaConfig) -> usize {
    let n = g.num_vertices();
    let label = size_of::<Label>();
    let mut bytes = n * label + n * size_of::<AtomicBool>();
    if matches!(cfg.vertex_order, VertexOrder::Shuffled(_)) {
        bytes += n * label;
    }
    let workers = cfg.worker_count.max(1);
    bytes + workers * Selector::scratch_bytes(cfg.variant, cfg, n)
}

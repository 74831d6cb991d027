//! Python bindings. The module is importable as `sketchlpa`.

use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use sketchlpa::{
    generate, GraphError, GraphFormat, Label, ScanMode, UpdateRule, Variant, VertexOrder, Weight,
};

fn graph_err(e: GraphError) -> PyErr {
    match e {
        GraphError::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

fn format_arg(path: &str, format: Option<&str>) -> PyResult<GraphFormat> {
    match format {
        Some(f) => parse(f),
        None => Ok(GraphFormat::from_path(std::path::Path::new(path))),
    }
}

/// Undirected weighted graph in CSR form.
#[pyclass(name = "Graph", module = "sketchlpa", frozen)]
pub struct PyGraph {
    inner: sketchlpa::Graph,
}

impl PyGraph {
    fn vertex(&self, i: usize) -> PyResult<usize> {
        if i < self.inner.num_vertices() {
            Ok(i)
        } else {
            Err(PyIndexError::new_err(format!(
                "vertex {i} out of range for {} vertices",
                self.inner.num_vertices()
            )))
        }
    }
}

#[pymethods]
impl PyGraph {
    /// `Graph(n, edges)`: edges are `(u, v)` or `(u, v, weight)` tuples.
    /// Duplicates are summed and every edge is stored in both directions.
    #[new]
    fn new(n: usize, edges: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let mut list = Vec::with_capacity(edges.len());
        for e in edges {
            let triple = match e.extract::<(Label, Label, Weight)>() {
                Ok(t) => t,
                Err(_) => {
                    let (u, v) = e.extract::<(Label, Label)>()?;
                    (u, v, 1.0)
                }
            };
            list.push(triple);
        }
        Ok(PyGraph { inner: sketchlpa::Graph::from_edges(n, list).map_err(graph_err)? })
    }

    /// Loads a file; the format is guessed from the extension unless given
    /// (`"mm"` or `"edgelist"`).
    #[staticmethod]
    #[pyo3(signature = (path, format=None))]
    fn load(path: &str, format: Option<&str>) -> PyResult<Self> {
        let fmt = format_arg(path, format)?;
        Ok(PyGraph { inner: sketchlpa::Graph::load(path, fmt).map_err(graph_err)? })
    }

    #[staticmethod]
    fn parse_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: sketchlpa::Graph::parse_edge_list(text).map_err(graph_err)? })
    }

    #[staticmethod]
    fn parse_matrix_market(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: sketchlpa::Graph::parse_matrix_market(text).map_err(graph_err)? })
    }

    #[pyo3(signature = (path, format=None))]
    fn save(&self, path: &str, format: Option<&str>) -> PyResult<()> {
        let fmt = format_arg(path, format)?;
        self.inner.save(path, fmt).map_err(graph_err)
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    fn to_matrix_market(&self) -> String {
        self.inner.to_matrix_market()
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    /// Stored arcs: two per undirected edge, one per self-loop.
    #[getter]
    fn num_arcs(&self) -> usize {
        self.inner.num_arcs()
    }

    /// Sum of undirected edge weights (`m`).
    #[getter]
    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    fn degree(&self, i: usize) -> PyResult<usize> {
        Ok(self.inner.degree(self.vertex(i)?))
    }

    fn weighted_degree(&self, i: usize) -> PyResult<f64> {
        Ok(self.inner.weighted_degree(self.vertex(i)?))
    }

    fn neighbors(&self, i: usize) -> PyResult<Vec<(Label, Weight)>> {
        Ok(self.inner.neighbors(self.vertex(i)?).collect())
    }

    /// Undirected edges `(i, j, w)` with `i <= j`.
    fn edges(&self) -> Vec<(Label, Label, Weight)> {
        self.inner.edges().collect()
    }

    fn __len__(&self) -> usize {
        self.inner.num_vertices()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(num_vertices={}, num_edges={})",
            self.inner.num_vertices(),
            self.inner.edges().count()
        )
    }
}

/// Run parameters; every field can be passed as a keyword.
#[pyclass(name = "LpaConfig", module = "sketchlpa", eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyLpaConfig {
    inner: sketchlpa::LpaConfig,
}

#[pymethods]
impl PyLpaConfig {
    #[new]
    #[pyo3(signature = (
        variant="mg", k=8, rho=8, tau=0.05, max_iters=20, degree_threshold=128, groups=32,
        scan="single", workers=0, shared_sketch=false, update_rule="guaranteed", order="ascending"
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        variant: &str,
        k: usize,
        rho: usize,
        tau: f64,
        max_iters: usize,
        degree_threshold: usize,
        groups: usize,
        scan: &str,
        workers: usize,
        shared_sketch: bool,
        update_rule: &str,
        order: &str,
    ) -> PyResult<Self> {
        let inner = sketchlpa::LpaConfig {
            variant: parse::<Variant>(variant)?,
            scan_mode: parse::<ScanMode>(scan)?,
            sketch_slots: k,
            pickless_gap: rho,
            tolerance: tau,
            max_iterations: max_iters,
            degree_threshold,
            partial_groups: groups,
            worker_count: workers,
            shared_sketch,
            update_rule: parse::<UpdateRule>(update_rule)?,
            vertex_order: parse::<VertexOrder>(order)?,
        };
        inner.validate().map_err(value_err)?;
        Ok(PyLpaConfig { inner })
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant.to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.sketch_slots
    }

    #[getter]
    fn rho(&self) -> usize {
        self.inner.pickless_gap
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tolerance
    }

    #[getter]
    fn max_iters(&self) -> usize {
        self.inner.max_iterations
    }

    #[getter]
    fn degree_threshold(&self) -> usize {
        self.inner.degree_threshold
    }

    #[getter]
    fn groups(&self) -> usize {
        self.inner.partial_groups
    }

    #[getter]
    fn scan(&self) -> String {
        self.inner.scan_mode.to_string()
    }

    #[getter]
    fn workers(&self) -> usize {
        self.inner.worker_count
    }

    #[getter]
    fn shared_sketch(&self) -> bool {
        self.inner.shared_sketch
    }

    #[getter]
    fn update_rule(&self) -> String {
        self.inner.update_rule.to_string()
    }

    #[getter]
    fn order(&self) -> String {
        self.inner.vertex_order.to_string()
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "LpaConfig(variant='{}', k={}, rho={}, tau={}, max_iters={}, degree_threshold={}, groups={}, scan='{}', workers={}, shared_sketch={}, update_rule='{}', order='{}')",
            c.variant,
            c.sketch_slots,
            c.pickless_gap,
            c.tolerance,
            c.max_iterations,
            c.degree_threshold,
            c.partial_groups,
            c.scan_mode,
            c.worker_count,
            if c.shared_sketch { "True" } else { "False" },
            c.update_rule,
            c.vertex_order
        )
    }
}

#[pyclass(name = "LpaResult", module = "sketchlpa", frozen, get_all)]
pub struct PyLpaResult {
    labels: Vec<Label>,
    iterations: usize,
    delta_history: Vec<usize>,
    converged: bool,
    aux_bytes: usize,
}

#[pymethods]
impl PyLpaResult {
    fn __repr__(&self) -> String {
        format!(
            "LpaResult(iterations={}, converged={}, delta_history={:?}, aux_bytes={})",
            self.iterations,
            if self.converged { "True" } else { "False" },
            self.delta_history,
            self.aux_bytes
        )
    }
}

fn config_or_default(config: Option<PyRef<'_, PyLpaConfig>>) -> sketchlpa::LpaConfig {
    config.map(|c| c.inner.clone()).unwrap_or_default()
}

/// Runs label propagation; the GIL is released while the engine works.
#[pyfunction]
#[pyo3(signature = (graph, config=None))]
fn run_lpa(
    py: Python<'_>,
    graph: PyRef<'_, PyGraph>,
    config: Option<PyRef<'_, PyLpaConfig>>,
) -> PyResult<PyLpaResult> {
    let cfg = config_or_default(config);
    let g = &graph.inner;
    let res = py.detach(|| sketchlpa::lpa_run(g, &cfg)).map_err(value_err)?;
    Ok(PyLpaResult {
        labels: res.labels,
        iterations: res.iterations,
        delta_history: res.delta_history,
        converged: res.converged,
        aux_bytes: res.aux_bytes,
    })
}

#[pyfunction]
#[pyo3(signature = (graph, config=None))]
fn aux_memory_estimate(graph: PyRef<'_, PyGraph>, config: Option<PyRef<'_, PyLpaConfig>>) -> usize {
    sketchlpa::aux_memory_estimate(&graph.inner, &config_or_default(config))
}

#[pyfunction]
fn modularity(graph: PyRef<'_, PyGraph>, labels: Vec<Label>) -> PyResult<f64> {
    sketchlpa::modularity(&graph.inner, &labels).map_err(value_err)
}

/// Per-community totals as a dict of parallel lists.
#[pyfunction]
fn community_stats<'py>(
    py: Python<'py>,
    graph: PyRef<'_, PyGraph>,
    labels: Vec<Label>,
) -> PyResult<Bound<'py, PyDict>> {
    let s = sketchlpa::community_stats(&graph.inner, &labels).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("num_communities", s.num_communities)?;
    d.set_item("labels", s.labels)?;
    d.set_item("sizes", s.sizes)?;
    d.set_item("internal", s.internal)?;
    d.set_item("total", s.total)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (communities, block_size, p_in, p_out, seed=0))]
fn planted_partition(
    communities: usize,
    block_size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> PyResult<PyGraph> {
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) {
        return Err(PyValueError::new_err("probabilities must lie in [0, 1]"));
    }
    let inner = generate::planted_partition(communities, block_size, p_in, p_out, seed)
        .map_err(graph_err)?;
    Ok(PyGraph { inner })
}

/// Weighted Misra-Gries sketch with `k` slots.
#[pyclass(name = "MgSketch", module = "sketchlpa")]
pub struct PyMgSketch {
    inner: sketchlpa::MgSketch,
}

#[pymethods]
impl PyMgSketch {
    #[new]
    #[pyo3(signature = (k, rule="guaranteed"))]
    fn new(k: usize, rule: &str) -> PyResult<Self> {
        if k == 0 {
            return Err(PyValueError::new_err("k must be at least 1"));
        }
        Ok(PyMgSketch { inner: sketchlpa::MgSketch::with_rule(k, parse(rule)?) })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn rule(&self) -> String {
        self.inner.rule().to_string()
    }

    fn accumulate(&mut self, label: Label, weight: Weight) -> PyResult<()> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(PyValueError::new_err("weight must be positive and finite"));
        }
        self.inner.accumulate(label, weight);
        Ok(())
    }

    fn merge_from(&mut self, other: PyRef<'_, PyMgSketch>) -> PyResult<()> {
        self.inner.merge_from(&other.inner).map_err(value_err)
    }

    /// Heaviest label, ties to the smaller id; `None` when empty.
    fn max_key(&self) -> Option<Label> {
        self.inner.max_key()
    }

    /// Non-empty `(label, residual)` pairs in slot order.
    fn entries(&self) -> Vec<(Label, Weight)> {
        self.inner.entries().collect()
    }

    fn clear(&mut self) {
        self.inner.clear();
    }

    /// Zeroes every residual but keeps the keys, ready for a rescan.
    fn clear_values(&mut self) {
        self.inner.clear_values();
    }

    /// Adds `weight` to `label`'s slot if the sketch holds it; ignored
    /// otherwise.
    fn rescan_add(&mut self, label: Label, weight: Weight) {
        self.inner.rescan_add(label, weight);
    }

    fn __len__(&self) -> usize {
        self.inner.entries().count()
    }

    fn __repr__(&self) -> String {
        format!("MgSketch(k={}, entries={:?})", self.inner.k(), self.inner.entries().collect::<Vec<_>>())
    }
}

/// Weighted Boyer-Moore majority vote.
#[pyclass(name = "BmState", module = "sketchlpa", skip_from_py_object)]
#[derive(Clone)]
pub struct PyBmState {
    inner: sketchlpa::BmState,
}

#[pymethods]
impl PyBmState {
    #[new]
    #[pyo3(signature = (candidate, weight=0.0))]
    fn new(candidate: Label, weight: Weight) -> Self {
        PyBmState { inner: sketchlpa::BmState { candidate, weight } }
    }

    #[getter]
    fn candidate(&self) -> Label {
        self.inner.candidate
    }

    #[getter]
    fn weight(&self) -> Weight {
        self.inner.weight
    }

    #[pyo3(signature = (label, weight, rule="guaranteed"))]
    fn accumulate(&mut self, label: Label, weight: Weight, rule: &str) -> PyResult<()> {
        self.inner.accumulate_with(label, weight, parse(rule)?);
        Ok(())
    }

    fn __repr__(&self) -> String {
        format!("BmState(candidate={}, weight={})", self.inner.candidate, self.inner.weight)
    }
}

/// Heaviest state, ties to the smaller candidate.
#[pyfunction]
fn bm_reduce(states: Vec<PyRef<'_, PyBmState>>) -> PyResult<PyBmState> {
    let parts: Vec<sketchlpa::BmState> = states.iter().map(|s| s.inner).collect();
    let inner = sketchlpa::bm_reduce(&parts).map_err(value_err)?;
    Ok(PyBmState { inner })
}

#[pymodule]
#[pyo3(name = "sketchlpa")]
pub fn sketchlpa_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLpaConfig>()?;
    m.add_class::<PyLpaResult>()?;
    m.add_class::<PyMgSketch>()?;
    m.add_class::<PyBmState>()?;
    m.add_function(wrap_pyfunction!(run_lpa, m)?)?;
    m.add_function(wrap_pyfunction!(aux_memory_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(modularity, m)?)?;
    m.add_function(wrap_pyfunction!(community_stats, m)?)?;
    m.add_function(wrap_pyfunction!(planted_partition, m)?)?;
    m.add_function(wrap_pyfunction!(bm_reduce, m)?)?;
    m.add("EMPTY_KEY", sketchlpa::sketch::EMPTY_KEY)?;
    Ok(())
}

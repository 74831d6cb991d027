//! MatrixMarket and edge-list readers and canonical writers.

use super::{Graph, GraphError};
use crate::{Label, Weight};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    MatrixMarket,
    EdgeList,
}

impl GraphFormat {
    /// Guesses the format from a file extension; `.mtx`/`.mm` are
    /// MatrixMarket, anything else is an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") | Some("mm") => GraphFormat::MatrixMarket,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mm" | "mtx" | "matrix-market" => Ok(GraphFormat::MatrixMarket),
            "edgelist" | "el" | "edge-list" => Ok(GraphFormat::EdgeList),
            other => Err(format!("unknown graph format `{other}` (expected mm or edgelist)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeListOptions {
    /// Map arbitrary ids to `0..N` in first-seen order instead of using
    /// them directly.
    pub remap_ids: bool,
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Original id of each dense vertex, when ids were remapped.
    pub original_ids: Option<Vec<u64>>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn parse_weight(tok: &str, line: usize) -> Result<Weight, GraphError> {
    let w: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("bad weight `{tok}`")))?;
    if !(w.is_finite() && w > 0.0) {
        return Err(parse_err(line, format!("weight must be positive, got {tok}")));
    }
    Ok(w as Weight)
}

fn parse_id(tok: &str, line: usize) -> Result<u64, GraphError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad vertex id `{tok}`")))
}

impl Graph {
    pub fn load(path: impl AsRef<Path>, format: GraphFormat) -> Result<Self, GraphError> {
        let text = fs::read_to_string(path)?;
        match format {
            GraphFormat::MatrixMarket => Graph::parse_matrix_market(&text),
            GraphFormat::EdgeList => Graph::parse_edge_list(&text),
        }
    }

    /// Parses `src dst [weight]` lines; `#` and `%` lines are comments.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        Ok(Graph::parse_edge_list_with(text, EdgeListOptions::default())?.graph)
    }

    pub fn parse_edge_list_with(
        text: &str,
        opts: EdgeListOptions,
    ) -> Result<LoadedGraph, GraphError> {
        let mut raw = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 || toks.len() > 3 {
                return Err(parse_err(lineno, "expected `src dst [weight]`"));
            }
            let u = parse_id(toks[0], lineno)?;
            let v = parse_id(toks[1], lineno)?;
            let w = match toks.get(2) {
                Some(t) => parse_weight(t, lineno)?,
                None => 1.0,
            };
            raw.push((u, v, w));
        }
        if raw.is_empty() {
            return Err(GraphError::Empty);
        }

        if opts.remap_ids {
            let mut index: HashMap<u64, Label> = HashMap::new();
            let mut original = Vec::new();
            let mut dense = |id: u64| {
                *index.entry(id).or_insert_with(|| {
                    original.push(id);
                    (original.len() - 1) as Label
                })
            };
            let edges: Vec<_> = raw.iter().map(|&(u, v, w)| (dense(u), dense(v), w)).collect();
            let graph = Graph::from_edges(original.len(), edges)?;
            return Ok(LoadedGraph { graph, original_ids: Some(original) });
        }

        let max_id = raw.iter().map(|&(u, v, _)| u.max(v)).max().unwrap();
        if max_id >= Label::MAX as u64 - 1 {
            return Err(GraphError::TooLarge(max_id));
        }
        let edges = raw.into_iter().map(|(u, v, w)| (u as Label, v as Label, w));
        let graph = Graph::from_edges(max_id as usize + 1, edges)?;
        Ok(LoadedGraph { graph, original_ids: None })
    }

    /// Parses a MatrixMarket coordinate file (`pattern`, `integer` or `real`
    /// field; `general` or `symmetric` symmetry). Ids are shifted to 0-based.
    pub fn parse_matrix_market(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(GraphError::Empty)?;
        let head: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
        if head.len() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" {
            return Err(parse_err(1, "missing `%%MatrixMarket matrix` header"));
        }
        if head[2] != "coordinate" {
            return Err(parse_err(1, format!("unsupported layout `{}`", head[2])));
        }
        let pattern = match head[3].as_str() {
            "pattern" => true,
            "real" | "integer" | "double" => false,
            other => return Err(parse_err(1, format!("unsupported field `{other}`"))),
        };
        match head[4].as_str() {
            "general" | "symmetric" => {}
            other => return Err(parse_err(1, format!("unsupported symmetry `{other}`"))),
        }

        let mut size: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let Some((n, nnz)) = size else {
                if toks.len() != 3 {
                    return Err(parse_err(lineno, "expected `rows cols entries`"));
                }
                let rows = parse_id(toks[0], lineno)?;
                let cols = parse_id(toks[1], lineno)?;
                let nnz = parse_id(toks[2], lineno)?;
                let n = rows.max(cols);
                if n >= Label::MAX as u64 - 1 {
                    return Err(GraphError::TooLarge(n));
                }
                size = Some((n as usize, nnz as usize));
                edges.reserve(nnz as usize);
                continue;
            };
            if edges.len() == nnz {
                return Err(parse_err(lineno, format!("more than {nnz} entries")));
            }
            let want = if pattern { 2 } else { 3 };
            if toks.len() < want {
                return Err(parse_err(lineno, format!("expected {want} columns")));
            }
            let id = |tok: &str| -> Result<Label, GraphError> {
                let v = parse_id(tok, lineno)?;
                if v == 0 || v as usize > n {
                    return Err(GraphError::IdOutOfRange { id: v, n });
                }
                Ok((v - 1) as Label)
            };
            let r = id(toks[0])?;
            let c = id(toks[1])?;
            let w = if pattern { 1.0 } else { parse_weight(toks[2], lineno)? };
            edges.push((r, c, w));
        }
        let (n, nnz) = size.ok_or_else(|| parse_err(0, "missing size line"))?;
        if edges.len() != nnz {
            return Err(parse_err(0, format!("expected {nnz} entries, found {}", edges.len())));
        }
        Graph::from_edges(n, edges)
    }

    /// Canonical edge list: one `i j w` line per undirected edge with
    /// `i <= j`, weights printed with six significant digits.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, j, w) in self.edges() {
            let _ = writeln!(out, "{i} {j} {}", format_weight(w as f64));
        }
        out
    }

    /// Canonical MatrixMarket (`real symmetric`, lower triangle, 1-based).
    pub fn to_matrix_market(&self) -> String {
        let n = self.num_vertices();
        let nnz = self.edges().count();
        let mut out = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
        let _ = writeln!(out, "{n} {n} {nnz}");
        for (i, j, w) in self.edges() {
            let _ = writeln!(out, "{} {} {}", j + 1, i + 1, format_weight(w as f64));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>, format: GraphFormat) -> Result<(), GraphError> {
        let text = match format {
            GraphFormat::MatrixMarket => self.to_matrix_market(),
            GraphFormat::EdgeList => self.to_edge_list(),
        };
        let mut f = fs::File::create(path)?;
        f.write_all(text.as_bytes())?;
        Ok(())
    }
}

/// Formats like C's `%g`: six significant digits, trailing zeros trimmed,
/// scientific notation outside `[1e-4, 1e6)`.
pub fn format_weight(w: f64) -> String {
    if w == 0.0 || !w.is_finite() {
        return format!("{w}");
    }
    let sci = format!("{w:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let fixed = format!("{w:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

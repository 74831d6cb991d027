//! Command-line front end for `sketchlpa`: run one variant on a graph,
//! benchmark variants against each other, or convert between formats.
//!
//! [`run`] takes the argument list and output streams explicitly so the
//! binary and the tests share one code path.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sketchlpa::{
    community_stats, lpa_run, modularity, Graph, GraphError, GraphFormat, LpaConfig, ScanMode,
    UpdateRule, Variant, VertexOrder,
};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sketchlpa", version, about = "Memory-bounded label propagation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect communities in one graph and print a report.
    Run(RunArgs),
    /// Run several variants repeatedly and compare them.
    Bench(BenchArgs),
    /// Rewrite a graph in canonical form.
    Convert(ConvertArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Graph file (.mtx/.mm is read as MatrixMarket, anything else as an edge list).
    pub input: PathBuf,
    /// Override format detection.
    #[arg(long, value_parser = parse_from_str::<GraphFormat>)]
    pub format: Option<GraphFormat>,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Sketch slots per Misra-Gries sketch.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Pick-less mode every RHO iterations.
    #[arg(long, default_value_t = 8)]
    pub rho: usize,
    /// Stop once fewer than TAU * N vertices change in a normal iteration.
    #[arg(long, default_value_t = 0.05)]
    pub tau: f64,
    #[arg(long, default_value_t = 20)]
    pub max_iters: usize,
    /// Degree at which a vertex's neighbors are split into partial groups.
    #[arg(long, default_value_t = 128)]
    pub degree_threshold: usize,
    /// Number of partial groups for high-degree vertices.
    #[arg(long, default_value_t = 32)]
    pub groups: usize,
    #[arg(long, default_value = "single", value_parser = parse_from_str::<ScanMode>)]
    pub scan: ScanMode,
    /// Worker threads; 0 runs sequentially and deterministically.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// `ascending` or `shuffled:SEED`.
    #[arg(long, default_value = "ascending", value_parser = parse_from_str::<VertexOrder>)]
    pub seed_order: VertexOrder,
    /// Sketch update rule: `guaranteed` or `simple`.
    #[arg(long, default_value = "guaranteed", value_parser = parse_from_str::<UpdateRule>)]
    pub update_rule: UpdateRule,
    /// High-degree Misra-Gries vertices share one sketch instead of merging partials.
    #[arg(long)]
    pub shared_sketch: bool,
}

impl EngineArgs {
    pub fn config(&self, variant: Variant) -> LpaConfig {
        LpaConfig {
            variant,
            scan_mode: self.scan,
            sketch_slots: self.k,
            pickless_gap: self.rho,
            tolerance: self.tau,
            max_iterations: self.max_iters,
            degree_threshold: self.degree_threshold,
            partial_groups: self.groups,
            worker_count: self.workers,
            shared_sketch: self.shared_sketch,
            update_rule: self.update_rule,
            vertex_order: self.seed_order,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "mg", value_parser = parse_from_str::<Variant>)]
    pub variant: Variant,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Write `vertex<TAB>label` lines here.
    #[arg(long)]
    pub out_labels: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub report: ReportFormat,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated variants to compare.
    #[arg(long, value_delimiter = ',', default_value = "exact,bm,mg", value_parser = parse_from_str::<Variant>)]
    pub variants: Vec<Variant>,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeats: u32,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub report: ReportFormat,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output format.
    #[arg(long, value_parser = parse_from_str::<GraphFormat>)]
    pub to: GraphFormat,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_from_str<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Load { path: String, source: GraphError },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Load { .. } | CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub graph_name: String,
    #[serde(rename = "N")]
    pub n: usize,
    /// Undirected edges after merging, self-loops included.
    #[serde(rename = "M")]
    pub m: usize,
    pub variant: Variant,
    pub config: LpaConfig,
    pub iterations: usize,
    pub converged: bool,
    pub delta_history: Vec<usize>,
    /// `None` for a graph without edges.
    pub modularity: Option<f64>,
    pub num_communities: usize,
    pub wall_time_ms: f64,
    pub aux_bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub variant: Variant,
    pub repeats: u32,
    pub mean_wall_time_ms: f64,
    pub mean_modularity: Option<f64>,
    pub mean_iterations: f64,
    pub aux_bytes: usize,
    /// Mean modularity divided by the exact variant's.
    pub modularity_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub graph_name: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub config: LpaConfig,
    pub rows: Vec<BenchRow>,
}

/// Parses `args` (program name first) and executes the command. Returns the
/// process exit code; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Run(args) => cmd_run(&args, out),
        Command::Bench(args) => cmd_bench(&args, out),
        Command::Convert(args) => cmd_convert(&args, out),
    }
}

fn load(input: &InputArgs) -> Result<Graph, CliError> {
    let format = input.format.unwrap_or_else(|| GraphFormat::from_path(&input.input));
    Graph::load(&input.input, format).map_err(|source| CliError::Load {
        path: input.input.display().to_string(),
        source,
    })
}

fn graph_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn validated(cfg: LpaConfig) -> Result<LpaConfig, CliError> {
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Runs the engine once and builds a report. Wall time covers `lpa_run` only.
pub fn run_once(g: &Graph, name: &str, cfg: &LpaConfig) -> Result<(RunReport, Vec<u32>), CliError> {
    let start = Instant::now();
    let res = lpa_run(g, cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let q = modularity(g, &res.labels).ok();
    let stats = community_stats(g, &res.labels).map_err(|e| CliError::Runtime(e.to_string()))?;
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        graph_name: name.to_string(),
        n: g.num_vertices(),
        m: g.edges().count(),
        variant: cfg.variant,
        config: cfg.clone(),
        iterations: res.iterations,
        converged: res.converged,
        delta_history: res.delta_history,
        modularity: q,
        num_communities: stats.num_communities,
        wall_time_ms,
        aux_bytes: res.aux_bytes,
    };
    Ok((report, res.labels))
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = validated(args.engine.config(args.variant))?;
    let g = load(&args.input)?;
    let (report, labels) = run_once(&g, &graph_name(&args.input.input), &cfg)?;
    if let Some(path) = &args.out_labels {
        fs::write(path, labels_text(&labels))
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    }
    match args.report {
        ReportFormat::Json => writeln!(out, "{}", to_json(&report)?)?,
        ReportFormat::Csv => write!(out, "{}", run_report_csv(&report))?,
        ReportFormat::Text => write!(out, "{}", run_report_text(&report))?,
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.variants.is_empty() {
        return Err(CliError::Usage("--variants must name at least one variant".into()));
    }
    let base = validated(args.engine.config(Variant::Exact))?;
    let g = load(&args.input)?;
    let name = graph_name(&args.input.input);

    let mut rows = Vec::new();
    for &variant in &args.variants {
        rows.push(bench_variant(&g, &name, &LpaConfig { variant, ..base.clone() }, args.repeats)?);
    }
    let exact_q = match rows.iter().find(|r| r.variant == Variant::Exact) {
        Some(r) => r.mean_modularity,
        None => bench_variant(&g, &name, &base, args.repeats)?.mean_modularity,
    };
    for row in &mut rows {
        row.modularity_ratio = match (row.mean_modularity, exact_q) {
            (Some(q), Some(e)) if e != 0.0 => Some(q / e),
            _ => None,
        };
    }

    let report = BenchReport {
        schema_version: SCHEMA_VERSION,
        graph_name: name,
        n: g.num_vertices(),
        m: g.edges().count(),
        config: base,
        rows,
    };
    match args.report {
        ReportFormat::Json => writeln!(out, "{}", to_json(&report)?)?,
        ReportFormat::Csv => write!(out, "{}", bench_report_csv(&report))?,
        ReportFormat::Text => write!(out, "{}", bench_report_text(&report))?,
    }
    Ok(())
}

fn bench_variant(g: &Graph, name: &str, cfg: &LpaConfig, repeats: u32) -> Result<BenchRow, CliError> {
    let mut time = 0.0;
    let mut q_sum = Some(0.0);
    let mut iterations = 0.0;
    let mut aux_bytes = 0;
    for _ in 0..repeats {
        let (r, _) = run_once(g, name, cfg)?;
        time += r.wall_time_ms;
        q_sum = q_sum.zip(r.modularity).map(|(a, b)| a + b);
        iterations += r.iterations as f64;
        aux_bytes = r.aux_bytes;
    }
    let r = repeats as f64;
    Ok(BenchRow {
        variant: cfg.variant,
        repeats,
        mean_wall_time_ms: time / r,
        mean_modularity: q_sum.map(|q| q / r),
        mean_iterations: iterations / r,
        aux_bytes,
        modularity_ratio: None,
    })
}

fn cmd_convert(args: &ConvertArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load(&args.input)?;
    let text = match args.to {
        GraphFormat::MatrixMarket => g.to_matrix_market(),
        GraphFormat::EdgeList => g.to_edge_list(),
    };
    match &args.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?,
        None => write!(out, "{text}")?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn labels_text(labels: &[u32]) -> String {
    let mut s = String::with_capacity(labels.len() * 8);
    for (v, c) in labels.iter().enumerate() {
        s.push_str(&format!("{v}\t{c}\n"));
    }
    s
}

fn opt_f64(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn config_columns(cfg: &LpaConfig) -> [(&'static str, String); 12] {
    [
        ("variant", cfg.variant.to_string()),
        ("scan_mode", cfg.scan_mode.to_string()),
        ("sketch_slots", cfg.sketch_slots.to_string()),
        ("pickless_gap", cfg.pickless_gap.to_string()),
        ("tolerance", cfg.tolerance.to_string()),
        ("max_iterations", cfg.max_iterations.to_string()),
        ("degree_threshold", cfg.degree_threshold.to_string()),
        ("partial_groups", cfg.partial_groups.to_string()),
        ("worker_count", cfg.worker_count.to_string()),
        ("shared_sketch", cfg.shared_sketch.to_string()),
        ("update_rule", cfg.update_rule.to_string()),
        ("vertex_order", cfg.vertex_order.to_string()),
    ]
}

/// Header plus one row. `delta_history` is `;`-separated.
pub fn run_report_csv(r: &RunReport) -> String {
    let mut cols: Vec<(&str, String)> = vec![
        ("schema_version", r.schema_version.to_string()),
        ("graph_name", csv_field(&r.graph_name)),
        ("N", r.n.to_string()),
        ("M", r.m.to_string()),
    ];
    cols.extend(config_columns(&r.config));
    cols.extend([
        ("iterations", r.iterations.to_string()),
        ("converged", r.converged.to_string()),
        (
            "delta_history",
            r.delta_history.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";"),
        ),
        ("modularity", opt_f64(r.modularity)),
        ("num_communities", r.num_communities.to_string()),
        ("wall_time_ms", r.wall_time_ms.to_string()),
        ("aux_bytes", r.aux_bytes.to_string()),
    ]);
    let header: Vec<&str> = cols.iter().map(|c| c.0).collect();
    let row: Vec<&str> = cols.iter().map(|c| c.1.as_str()).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

pub fn bench_report_csv(r: &BenchReport) -> String {
    let mut s = String::from(
        "graph_name,N,M,variant,repeats,mean_wall_time_ms,mean_modularity,mean_iterations,aux_bytes,modularity_ratio\n",
    );
    for row in &r.rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&r.graph_name),
            r.n,
            r.m,
            row.variant,
            row.repeats,
            row.mean_wall_time_ms,
            opt_f64(row.mean_modularity),
            row.mean_iterations,
            row.aux_bytes,
            opt_f64(row.modularity_ratio),
        ));
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run_report_text(r: &RunReport) -> String {
    let mut s = format!("graph        {} (N={}, M={})\n", r.graph_name, r.n, r.m);
    let cfg = &r.config;
    s += &format!(
        "variant      {} (k={}, rho={}, tau={}, scan={}, rule={}, workers={}, order={})\n",
        cfg.variant,
        cfg.sketch_slots,
        cfg.pickless_gap,
        cfg.tolerance,
        cfg.scan_mode,
        cfg.update_rule,
        cfg.worker_count,
        cfg.vertex_order
    );
    s += &format!(
        "iterations   {} ({})\n",
        r.iterations,
        if r.converged { "converged" } else { "hit max-iters" }
    );
    s += &format!("changed      {:?}\n", r.delta_history);
    s += &format!(
        "modularity   {}\n",
        r.modularity.map_or("undefined (no edges)".to_string(), |q| format!("{q:.6}"))
    );
    s += &format!("communities  {}\n", r.num_communities);
    s += &format!("time         {:.3} ms\n", r.wall_time_ms);
    s += &format!("aux memory   {} bytes\n", r.aux_bytes);
    s
}

fn bench_report_text(r: &BenchReport) -> String {
    let mut s = format!("graph {} (N={}, M={})\n", r.graph_name, r.n, r.m);
    s += &format!(
        "{:<8}{:>8}{:>14}{:>12}{:>10}{:>14}{:>8}\n",
        "variant", "repeats", "time_ms", "modularity", "iters", "aux_bytes", "ratio"
    );
    for row in &r.rows {
        s += &format!(
            "{:<8}{:>8}{:>14.3}{:>12}{:>10.1}{:>14}{:>8}\n",
            row.variant.to_string(),
            row.repeats,
            row.mean_wall_time_ms,
            row.mean_modularity.map_or("-".into(), |q| format!("{q:.4}")),
            row.mean_iterations,
            row.aux_bytes,
            row.modularity_ratio.map_or("-".into(), |q| format!("{q:.3}")),
        );
    }
    s
}

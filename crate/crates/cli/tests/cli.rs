use serde_json::Value;
use sketchlpa::{LpaConfig, ScanMode, UpdateRule, Variant, VertexOrder};
use sketchlpa_cli::{BenchReport, RunReport, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["sketchlpa"];
    argv.extend_from_slice(args);
    let code = sketchlpa_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = cli(args);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    out
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs").join(name);
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, json: &str) {
    let value: Value = serde_json::from_str(json).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{json}");
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Two unit-weight K4 cliques joined by a light edge. (A unit bridge would
/// tie with clique edges and let label 0 flood across.)
const BARBELL: &str = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n4 5\n4 6\n4 7\n5 6\n5 7\n6 7\n3 4 0.25\n";

#[test]
fn triangle_merges_to_one_community() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "triangle.el", "0 1\n1 2\n2 0\n");
    let report: RunReport =
        serde_json::from_str(&ok(&["run", s(&tri), "--variant", "exact", "--report", "json"])).unwrap();
    assert_eq!(report.num_communities, 1);
    assert_eq!(report.modularity, Some(0.0));
    assert_eq!(report.graph_name, "triangle");
    assert_eq!((report.n, report.m), (3, 3));
}

#[test]
fn json_report_validates_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BARBELL);
    let validator = schema("run_report.schema.json");
    let json = ok(&[
        "run", s(&g), "--variant", "mg", "--k", "3", "--rho", "4", "--tau", "0.1", "--max-iters", "9",
        "--degree-threshold", "2", "--groups", "3", "--scan", "double", "--workers", "2",
        "--seed-order", "shuffled:11", "--update-rule", "simple", "--shared-sketch", "--report", "json",
    ]);
    assert_valid(&validator, &json);
    let report: RunReport = serde_json::from_str(&json).unwrap();
    let expected = LpaConfig {
        variant: Variant::Mg,
        scan_mode: ScanMode::Double,
        sketch_slots: 3,
        pickless_gap: 4,
        tolerance: 0.1,
        max_iterations: 9,
        degree_threshold: 2,
        partial_groups: 3,
        worker_count: 2,
        shared_sketch: true,
        update_rule: UpdateRule::Simple,
        vertex_order: VertexOrder::Shuffled(11),
    };
    assert_eq!(report.config, expected);
    let reparsed: LpaConfig =
        serde_json::from_str(&serde_json::to_string(&report.config).unwrap()).unwrap();
    assert_eq!(reparsed, expected);
    assert_eq!(report.delta_history.len(), report.iterations);

    for variant in ["exact", "bm"] {
        assert_valid(&validator, &ok(&["run", s(&g), "--variant", variant, "--report", "json"]));
    }
}

#[test]
fn edgeless_graph_reports_null_modularity() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.mtx", "%%MatrixMarket matrix coordinate pattern general\n4 4 0\n");
    let json = ok(&["run", s(&g), "--report", "json"]);
    assert_valid(&schema("run_report.schema.json"), &json);
    let report: RunReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.modularity, None);
    assert_eq!(report.num_communities, 4);
}

#[test]
fn every_report_field_appears_in_csv_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BARBELL);
    let json: Value = serde_json::from_str(&ok(&["run", s(&g), "--report", "json"])).unwrap();
    let csv = ok(&["run", s(&g), "--report", "csv"]);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), row.len());
    for (key, value) in json.as_object().unwrap() {
        if key == "config" {
            for cfg_key in value.as_object().unwrap().keys() {
                assert!(header.contains(&cfg_key.as_str()), "csv lacks {cfg_key}");
            }
        } else {
            assert!(header.contains(&key.as_str()), "csv lacks {key}");
        }
    }
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("num_communities"), json["num_communities"].to_string());
    assert_eq!(col("modularity").parse::<f64>().unwrap(), json["modularity"].as_f64().unwrap());

    let text = ok(&["run", s(&g), "--report", "text"]);
    for word in ["modularity", "communities", "iterations", "aux memory", "time"] {
        assert!(text.contains(word), "text report lacks {word}");
    }
}

#[test]
fn labels_file_has_one_line_per_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BARBELL);
    let out = dir.path().join("labels.tsv");
    ok(&["run", s(&g), "--variant", "exact", "--out-labels", s(&out)]);
    let text = fs::read_to_string(&out).unwrap();
    let expected: String = [0, 0, 0, 0, 4, 4, 4, 4]
        .iter()
        .enumerate()
        .map(|(v, c)| format!("{v}\t{c}\n"))
        .collect();
    assert_eq!(text, expected);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BARBELL);
    let bad = write(dir.path(), "bad.el", "0 x\n");
    assert_eq!(cli(&["run", s(&g), "--tau", "1.5"]).0, EXIT_USAGE);
    assert_eq!(cli(&["run", s(&g), "--k", "0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["run", s(&g), "--variant", "louvain"]).0, EXIT_USAGE);
    assert_eq!(cli(&["run"]).0, EXIT_USAGE);
    assert_eq!(cli(&["bench", s(&g), "--repeats", "0"]).0, EXIT_USAGE);
    let (code, _, err) = cli(&["run", s(&bad)]);
    assert_eq!(code, EXIT_RUNTIME);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    assert_eq!(cli(&["run", s(&dir.path().join("missing.el"))]).0, EXIT_RUNTIME);
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_reports_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BARBELL);
    let bin = env!("CARGO_BIN_EXE_sketchlpa");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let good = run(&["run", s(&g), "--report", "json"]);
    assert!(good.status.success());
    assert_valid(&schema("run_report.schema.json"), std::str::from_utf8(&good.stdout).unwrap());
    assert_eq!(run(&["run", s(&g), "--tau", "1.5"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(run(&["run", "/nonexistent/g.el"]).status.code(), Some(EXIT_RUNTIME));
}

#[test]
fn convert_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write(dir.path(), "raw.el", "# messy input\n3 1 2\n0 1\n1 0 0.5\n2 3\n2 2 1.5\n");
    let canon = dir.path().join("canon.el");
    let mm = dir.path().join("canon.mtx");
    let back = dir.path().join("back.el");
    ok(&["convert", s(&raw), "--to", "edgelist", "-o", s(&canon)]);
    ok(&["convert", s(&canon), "--to", "mm", "-o", s(&mm)]);
    ok(&["convert", s(&mm), "--to", "edgelist", "-o", s(&back)]);
    let canon_text = fs::read_to_string(&canon).unwrap();
    assert_eq!(canon_text, fs::read_to_string(&back).unwrap());
    // canonical form is a fixed point
    assert_eq!(ok(&["convert", s(&canon), "--to", "edgelist"]), canon_text);
    assert_eq!(ok(&["convert", s(&mm), "--to", "mm"]), fs::read_to_string(&mm).unwrap());
}

#[test]
fn convert_collapses_directions_and_sums_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", "1 0 2\n0 1 0.5\n2 1\n1 2\n0 1\n");
    let out = ok(&["convert", s(&g), "--to", "edgelist"]);
    let mut weights = std::collections::BTreeMap::new();
    for line in out.lines().filter(|l| !l.starts_with('#') && !l.starts_with('%')) {
        let t: Vec<&str> = line.split_whitespace().collect();
        let (i, j): (u32, u32) = (t[0].parse().unwrap(), t[1].parse().unwrap());
        assert!(i <= j, "{line}");
        assert!(weights.insert((i, j), t[2].parse::<f64>().unwrap()).is_none(), "duplicate {line}");
    }
    let expected: std::collections::BTreeMap<_, _> = [((0, 1), 3.5), ((1, 2), 2.0)].into();
    assert_eq!(weights, expected);
}

#[test]
fn bench_reports_ratio_one_when_sketch_is_lossless() {
    // max degree 2 < k, so mg never drops a label and matches exact
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n6 7\n7 8\n8 6\n");
    let json = ok(&["bench", s(&g), "--variants", "exact,mg", "--repeats", "2", "--report", "json"]);
    assert_valid(&schema("bench_report.schema.json"), &json);
    let report: BenchReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.rows.len(), 2);
    for row in &report.rows {
        assert_eq!(row.modularity_ratio, Some(1.0), "{row:?}");
    }
    let exact = &report.rows[0];
    let mg = &report.rows[1];
    assert!(mg.aux_bytes > 0 && exact.aux_bytes > 0);
}

#[test]
fn bench_without_exact_still_reports_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BARBELL);
    let report: BenchReport =
        serde_json::from_str(&ok(&["bench", s(&g), "--variants", "mg", "--repeats", "1"])).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.rows[0].modularity_ratio, Some(1.0));
    let csv = ok(&["bench", s(&g), "--variants", "mg,bm", "--repeats", "1", "--report", "csv"]);
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn single_repeat_means_equal_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.el", BARBELL);
    let run: RunReport =
        serde_json::from_str(&ok(&["run", s(&g), "--variant", "bm", "--report", "json"])).unwrap();
    let bench: BenchReport =
        serde_json::from_str(&ok(&["bench", s(&g), "--variants", "bm", "--repeats", "1"])).unwrap();
    let row = &bench.rows[0];
    assert_eq!(row.mean_modularity, run.modularity);
    assert_eq!(row.mean_iterations, run.iterations as f64);
    assert_eq!(row.aux_bytes, run.aux_bytes);
}

#[test]
fn bench_mg_uses_less_memory_when_worker_maps_dominate() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 0..5000 {
        text.push_str(&format!("{i} {}\n", (i + 1) % 5000));
    }
    let g = write(dir.path(), "ring.el", &text);
    let report: BenchReport = serde_json::from_str(&ok(&[
        "bench", s(&g), "--variants", "exact,mg", "--repeats", "1", "--workers", "8",
    ]))
    .unwrap();
    assert!(report.rows[1].aux_bytes < report.rows[0].aux_bytes, "{:?}", report.rows);
}

#[test]
fn sequential_repeats_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 0u64..300 {
        for j in [1, 7, 31] {
            text.push_str(&format!("{i} {} {}\n", (i * j + 13) % 300, 0.5 + (i % 3) as f64));
        }
    }
    let g = write(dir.path(), "g.el", &text);
    for variant in ["exact", "bm", "mg"] {
        let runs: Vec<RunReport> = (0..3)
            .map(|_| {
                serde_json::from_str(&ok(&[
                    "run", s(&g), "--variant", variant, "--workers", "0", "--report", "json",
                ]))
                .unwrap()
            })
            .collect();
        for r in &runs[1..] {
            assert_eq!(r.delta_history, runs[0].delta_history);
            assert_eq!(r.modularity.map(f64::to_bits), runs[0].modularity.map(f64::to_bits));
        }
    }
}

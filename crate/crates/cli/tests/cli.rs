//! End-to-end tests driving the compiled binary through temp directories.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

/// The running example: eleven vertices a..i plus two hubs, external ids
/// 1..=11 with the hubs at 3 and 5.
const EXAMPLE_EDGES: &str = "3 1\n3 2\n3 4\n5 4\n5 6\n5 9\n2 7\n6 11\n8 9\n9 10\n10 11\n3 8\n";
const EXAMPLE_LANDMARKS: &str = "3 5\n";
const EXAMPLE_BATCH: &str = "- 3 8\n+ 5 1\n+ 7 8\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().expect("temp dir"),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.path(name);
        fs::write(&path, contents).expect("write fixture");
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_hwcl"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .expect("spawn hwcl")
    }

    fn run_ok(&self, args: &[&str]) -> Output {
        let out = self.run(args);
        assert!(
            out.status.success(),
            "hwcl {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out
    }
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn bytes(path: &Path) -> Vec<u8> {
    fs::read(path).expect("read output file")
}

/// Builds the example labelling in `ws`, returning the labelling path.
fn build_example(ws: &Workspace) -> PathBuf {
    ws.file("g.txt", EXAMPLE_EDGES);
    ws.file("lm.txt", EXAMPLE_LANDMARKS);
    ws.run_ok(&[
        "build",
        "--graph",
        "g.txt",
        "--landmarks-file",
        "lm.txt",
        "--out",
        "labels.bin",
    ]);
    ws.path("labels.bin")
}

#[test]
fn build_reports_stats_and_is_deterministic() {
    let ws = Workspace::new();
    ws.file("g.txt", EXAMPLE_EDGES);
    ws.file("lm.txt", EXAMPLE_LANDMARKS);
    let args = |out: &'static str| {
        vec![
            "build",
            "--graph",
            "g.txt",
            "--landmarks-file",
            "lm.txt",
            "--out",
            out,
        ]
    };
    let first = ws.run_ok(&args("a.bin"));
    ws.run_ok(&args("b.bin"));

    let log = stderr(&first);
    assert!(log.contains("n=11 "), "stderr: {log}");
    assert!(log.contains("m=12 "), "stderr: {log}");
    assert!(log.contains("k=2 "), "stderr: {log}");
    assert!(log.contains("size=13 "), "stderr: {log}");
    assert_eq!(bytes(&ws.path("a.bin")), bytes(&ws.path("b.bin")));
    assert_eq!(bytes(&ws.path("a.bin.ids")), bytes(&ws.path("b.bin.ids")));
}

#[test]
fn build_rejects_more_landmarks_than_vertices() {
    let ws = Workspace::new();
    ws.file("g.txt", "1 2\n2 3\n");
    let out = ws.run(&["build", "--graph", "g.txt", "--k", "20", "--out", "l.bin"]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("landmark count 20"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn build_rejects_landmark_missing_from_graph() {
    let ws = Workspace::new();
    ws.file("g.txt", EXAMPLE_EDGES);
    ws.file("lm.txt", "3 99\n");
    let out = ws.run(&[
        "build",
        "--graph",
        "g.txt",
        "--landmarks-file",
        "lm.txt",
        "--out",
        "l.bin",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("99"), "stderr: {}", stderr(&out));
}

#[test]
fn update_reports_per_landmark_affected_counts() {
    let ws = Workspace::new();
    build_example(&ws);
    ws.file("batch.txt", EXAMPLE_BATCH);
    let out = ws.run_ok(&[
        "update",
        "--graph",
        "g.txt",
        "--labels",
        "labels.bin",
        "--batch",
        "batch.txt",
        "--out",
        "updated.bin",
    ]);
    let log = stderr(&out);
    assert!(log.contains("variant=improved "), "stderr: {log}");
    assert!(log.contains("affected_per_landmark=4,2 "), "stderr: {log}");
    assert!(log.contains("affected_total=6 "), "stderr: {log}");
    assert!(log.contains("size=13 "), "stderr: {log}");
}

#[test]
fn empty_batch_leaves_labelling_bytes_unchanged() {
    let ws = Workspace::new();
    let labels = build_example(&ws);
    ws.file("batch.txt", "# nothing to do\n\n");
    let out = ws.run_ok(&[
        "update",
        "--graph",
        "g.txt",
        "--labels",
        "labels.bin",
        "--batch",
        "batch.txt",
        "--out",
        "updated.bin",
    ]);
    assert!(stderr(&out).contains("updates=0 "));
    assert_eq!(bytes(&labels), bytes(&ws.path("updated.bin")));
    assert_eq!(
        bytes(&ws.path("labels.bin.ids")),
        bytes(&ws.path("updated.bin.ids"))
    );
}

#[test]
fn basic_and_improved_agree_on_final_labelling() {
    let ws = Workspace::new();
    build_example(&ws);
    ws.file("batch.txt", EXAMPLE_BATCH);
    for (variant, out_name) in [("basic", "ub.bin"), ("improved", "ui.bin")] {
        ws.run_ok(&[
            "update",
            "--graph",
            "g.txt",
            "--labels",
            "labels.bin",
            "--batch",
            "batch.txt",
            "--variant",
            variant,
            "--out",
            out_name,
        ]);
    }
    assert_eq!(bytes(&ws.path("ub.bin")), bytes(&ws.path("ui.bin")));
}

#[test]
fn parallel_workers_match_sequential_output() {
    let ws = Workspace::new();
    build_example(&ws);
    ws.file("batch.txt", EXAMPLE_BATCH);
    for (workers, out_name) in [("1", "w1.bin"), ("4", "w4.bin")] {
        ws.run_ok(&[
            "update",
            "--graph",
            "g.txt",
            "--labels",
            "labels.bin",
            "--batch",
            "batch.txt",
            "--workers",
            workers,
            "--out",
            out_name,
        ]);
    }
    assert_eq!(bytes(&ws.path("w1.bin")), bytes(&ws.path("w4.bin")));
}

#[test]
fn update_then_query_matches_rebuild_on_updated_graph() {
    let ws = Workspace::new();
    build_example(&ws);
    ws.file("batch.txt", EXAMPLE_BATCH);
    ws.run_ok(&[
        "update",
        "--graph",
        "g.txt",
        "--labels",
        "labels.bin",
        "--batch",
        "batch.txt",
        "--out-graph",
        "g2.txt",
        "--out",
        "updated.bin",
    ]);
    // Every ordered pair of external ids, both directions.
    let mut pairs = String::new();
    for s in 1..=11 {
        for t in 1..=11 {
            pairs.push_str(&format!("{s} {t}\n"));
        }
    }
    ws.file("pairs.txt", &pairs);

    let updated = ws.run_ok(&[
        "query",
        "--graph",
        "g2.txt",
        "--labels",
        "updated.bin",
        "--pairs",
        "pairs.txt",
    ]);
    ws.run_ok(&[
        "build",
        "--graph",
        "g2.txt",
        "--landmarks-file",
        "lm.txt",
        "--out",
        "rebuilt.bin",
    ]);
    let rebuilt = ws.run_ok(&[
        "query",
        "--graph",
        "g2.txt",
        "--labels",
        "rebuilt.bin",
        "--pairs",
        "pairs.txt",
    ]);
    assert_eq!(stdout(&updated), stdout(&rebuilt));
}

#[test]
fn query_prints_distances_with_minus_one_for_unreachable() {
    let ws = Workspace::new();
    ws.file("g.txt", "1 2\n3 4\n");
    ws.run_ok(&["build", "--graph", "g.txt", "--k", "1", "--out", "l.bin"]);
    ws.file("pairs.txt", "1 2\n3 4\n1 3\n2 2\n");
    let out = ws.run_ok(&[
        "query", "--graph", "g.txt", "--labels", "l.bin", "--pairs", "pairs.txt",
    ]);
    assert_eq!(stdout(&out), "1\n1\n-1\n0\n");
}

#[test]
fn query_writes_output_file_when_asked() {
    let ws = Workspace::new();
    build_example(&ws);
    ws.file("pairs.txt", "7 11\n3 3\n");
    ws.run_ok(&[
        "query",
        "--graph",
        "g.txt",
        "--labels",
        "labels.bin",
        "--pairs",
        "pairs.txt",
        "--out",
        "d.txt",
    ]);
    assert_eq!(bytes(&ws.path("d.txt")), b"6\n0\n");
}

#[test]
fn query_rejects_unknown_external_id() {
    let ws = Workspace::new();
    build_example(&ws);
    ws.file("pairs.txt", "1 99\n");
    let out = ws.run(&[
        "query",
        "--graph",
        "g.txt",
        "--labels",
        "labels.bin",
        "--pairs",
        "pairs.txt",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("99"), "stderr: {}", stderr(&out));
}

#[test]
fn update_grows_vertex_set_for_new_endpoints() {
    let ws = Workspace::new();
    build_example(&ws);
    // Vertex 42 is new; a cancelled insert/delete pair on 77 must not
    // allocate it an id.
    ws.file("batch.txt", "+ 42 11\n+ 77 1\n- 77 1\n");
    ws.run_ok(&[
        "update",
        "--graph",
        "g.txt",
        "--labels",
        "labels.bin",
        "--batch",
        "batch.txt",
        "--out-graph",
        "g2.txt",
        "--out",
        "updated.bin",
    ]);
    let ids = fs::read_to_string(ws.path("updated.bin.ids")).unwrap();
    assert!(ids.lines().any(|l| l == "42"), "ids: {ids}");
    assert!(!ids.lines().any(|l| l == "77"), "ids: {ids}");

    ws.file("pairs.txt", "42 10\n");
    let out = ws.run_ok(&[
        "query",
        "--graph",
        "g2.txt",
        "--labels",
        "updated.bin",
        "--pairs",
        "pairs.txt",
    ]);
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn sidecar_keeps_vertices_that_lost_every_edge() {
    let ws = Workspace::new();
    build_example(&ws);
    // Vertex 6 has exactly the edges 5-6 and 6-11; dropping both isolates it.
    ws.file("batch.txt", "- 5 6\n- 6 11\n");
    ws.run_ok(&[
        "update",
        "--graph",
        "g.txt",
        "--labels",
        "labels.bin",
        "--batch",
        "batch.txt",
        "--out-graph",
        "g2.txt",
        "--out",
        "updated.bin",
    ]);
    assert!(!fs::read_to_string(ws.path("g2.txt")).unwrap().contains('6'));

    ws.file("pairs.txt", "6 3\n6 6\n");
    let out = ws.run_ok(&[
        "query",
        "--graph",
        "g2.txt",
        "--labels",
        "updated.bin",
        "--pairs",
        "pairs.txt",
    ]);
    assert_eq!(stdout(&out), "-1\n0\n");
}

#[test]
fn update_rejects_mismatched_graph() {
    let ws = Workspace::new();
    build_example(&ws);
    fs::remove_file(ws.path("labels.bin.ids")).unwrap();
    ws.file("other.txt", "1 2\n2 3\n");
    ws.file("batch.txt", EXAMPLE_BATCH);
    let out = ws.run(&[
        "update",
        "--graph",
        "other.txt",
        "--labels",
        "labels.bin",
        "--batch",
        "batch.txt",
        "--out",
        "updated.bin",
    ]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("covers 11 vertices"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn malformed_inputs_name_the_line() {
    let ws = Workspace::new();
    build_example(&ws);
    ws.file("batch.txt", "+ 1 2\n* 3 4\n");
    let out = ws.run(&[
        "update",
        "--graph",
        "g.txt",
        "--labels",
        "labels.bin",
        "--batch",
        "batch.txt",
        "--out",
        "u.bin",
    ]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("batch.txt:2"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn bench_emits_csv_rows_with_stable_hashes() {
    let ws = Workspace::new();
    ws.file("g.txt", EXAMPLE_EDGES);
    ws.file("batch.txt", EXAMPLE_BATCH);
    ws.run_ok(&[
        "bench",
        "--graph",
        "g.txt",
        "--k",
        "2",
        "--batches",
        "batch.txt",
        "--sizes",
        "4",
        "--workers",
        "1,2",
        "--seed",
        "7",
        "--out",
        "bench.csv",
    ]);
    let csv = fs::read_to_string(ws.path("bench.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some(
            "variant,batch,size,workers,affected_total,update_ms,mean_query_us,labelling_size,labelling_hash"
        )
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // 2 sources x 2 variants x 2 worker counts.
    assert_eq!(rows.len(), 8);

    // Same batch from the same base labelling must land on the same bytes
    // regardless of variant or worker count.
    let mut hashes: HashMap<&str, &str> = HashMap::new();
    let mut affected: HashMap<(&str, &str, &str), u64> = HashMap::new();
    for row in &rows {
        assert_eq!(row.len(), 9, "short row: {row:?}");
        let (variant, batch, workers) = (row[0], row[1], row[3]);
        let hash = row[8];
        assert_eq!(*hashes.entry(batch).or_insert(hash), hash);
        affected.insert((variant, batch, workers), row[4].parse().unwrap());
    }
    for ((variant, batch, workers), &total) in &affected {
        if *variant == "improved" {
            let basic = affected[&("basic", *batch, *workers)];
            assert!(total <= basic, "improved {total} > basic {basic}");
        }
    }
}

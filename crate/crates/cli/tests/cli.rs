use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_planarwidth"))
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn experiments() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../experiments")
}

#[test]
fn gen_k3n() {
    let out = run(&["gen", "k3n", "5"], "");
    assert!(out.status.success());
    let g = json(&out);
    assert_eq!(g["n"], 8);
    assert_eq!(g["edges"].as_array().unwrap().len(), 15);
}

#[test]
fn treedepth_of_k38() {
    let g = stdout(&run(&["gen", "complete_bipartite", "3", "8"], ""));
    let out = run(&["width", "--param", "treedepth", "--exact"], &g);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["param"], "treedepth");
    assert_eq!(v["value"], 3);
    assert!(v["witness"]["parent"].is_array());
}

#[test]
fn zarankiewicz_pipe_counts_crossings() {
    let report = stdout(&run(
        &["planarize", "--strategy", "zarankiewicz", "--n", "11"],
        "",
    ));
    let out = run(&["width", "--param", "crossings"], &report);
    assert_eq!(json(&out)["value"], 25);
}

#[test]
fn edge_list_input_and_orders() {
    let out = run(
        &["width", "--param", "cutwidth", "--order", "0,1,2,3"],
        "4 3\n0 1\n1 2\n2 3\n",
    );
    assert_eq!(json(&out)["value"], 1);
    let out = run(
        &["width", "--param", "bandwidth", "--order", "0,2,1,3"],
        "4 3\n0 1\n1 2\n2 3\n",
    );
    assert_eq!(json(&out)["value"], 2);
}

#[test]
fn planarize_strategies_validate() {
    let g = stdout(&run(&["gen", "k3n", "3"], ""));
    for strategy in ["convex", "carving", "clustered"] {
        let out = run(&["planarize", "--strategy", strategy], &g);
        assert!(
            out.status.success(),
            "{strategy}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let r = json(&out);
        assert_eq!(r["strategy"], strategy);
        assert!(r["validated_width"].as_u64().unwrap() >= 4);
        let planar = serde_json::to_string(&r["planarization"]).unwrap();
        let crossings = json(&run(&["width", "--param", "crossings"], &planar));
        assert_eq!(crossings["value"], r["crossings_added"]);
    }
}

#[test]
fn validate_carving_round_trip() {
    let g = stdout(&run(&["gen", "k3n", "3"], ""));
    let w = json(&run(&["width", "--param", "carvingwidth", "--exact"], &g));
    assert_eq!(w["value"], 4);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("carving.json");
    std::fs::write(&path, w["witness"].to_string()).unwrap();
    let out = run(
        &[
            "validate",
            "--kind",
            "carving",
            "--decomposition",
            path.to_str().unwrap(),
        ],
        &g,
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["width"], 4);

    // a carving of the wrong graph is rejected with exit 1
    let other = stdout(&run(&["gen", "path", "3"], ""));
    let out = run(
        &[
            "validate",
            "--kind",
            "carving",
            "--decomposition",
            path.to_str().unwrap(),
        ],
        &other,
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn validate_tree_and_forest() {
    let g = stdout(&run(&["gen", "cycle", "5"], ""));
    let dir = tempfile::tempdir().unwrap();
    for (param, file) in [("treewidth", "td.json"), ("treedepth", "forest.json")] {
        let w = json(&run(&["width", "--param", param, "--exact"], &g));
        let path = dir.path().join(file);
        std::fs::write(&path, w["witness"].to_string()).unwrap();
        let out = run(
            &[
                "validate",
                "--kind",
                "tree",
                "--decomposition",
                path.to_str().unwrap(),
            ],
            &g,
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(json(&out)["width"], w["value"]);
    }
}

#[test]
fn svg_output() {
    let out = run(&["svg", "--k3n", "4", "--planarized"], "");
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.starts_with("<?xml"));
    assert_eq!(s.matches("<rect ").count(), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["gen", "nope", "3"], "").status.code(), Some(2));
    assert_eq!(run(&["gen", "k3n"], "").status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], "").status.code(), Some(2));
    assert_eq!(
        run(&["width", "--param", "cutwidth"], "").status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["planarize", "--strategy", "zarankiewicz"], "")
            .status
            .code(),
        Some(2)
    );
    let out = run(&["width", "--param", "cutwidth", "--exact"], "not a graph");
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn size_limit_from_environment() {
    let g = stdout(&run(&["gen", "path", "6"], ""));
    let mut cmd = bin();
    cmd.env("PLANARWIDTH_LIMIT_CUTWIDTH", "4")
        .args(["width", "--param", "cutwidth", "--exact"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(g.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limited to 4"));
}

#[test]
fn experiment_exit_codes_and_determinism() {
    let pass = experiments().join("c01_crossing_formula.json");
    let a = run(&["experiment", "run", pass.to_str().unwrap()], "");
    assert_eq!(a.status.code(), Some(0));
    let b = run(
        &["--sequential", "experiment", "run", pass.to_str().unwrap()],
        "",
    );
    assert_eq!(a.stdout, b.stdout);
    let lines = stdout(&a);
    assert_eq!(lines.lines().count(), 12);
    for line in lines.lines() {
        serde_json::from_str::<Value>(line).unwrap();
    }

    let fail = experiments().join("c06_crossing_density.json");
    assert_eq!(
        run(&["experiment", "run", fail.to_str().unwrap()], "")
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn experiment_seed_changes_random_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(
        &path,
        r#"{"name": "s", "family": {"generator": "random_connected", "params": {"n": 7, "extra": 3, "seed": 1}},
            "checks": [{"kind": "row", "name": "c", "expr": "cutwidth == cutwidth_oracle"}]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let base = stdout(&run(&["experiment", "run", p], ""));
    let shifted = stdout(&run(&["experiment", "run", p, "--seed", "5"], ""));
    assert!(base.contains(r#""seed":1"#));
    assert!(shifted.contains(r#""seed":6"#));
}

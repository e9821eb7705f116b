use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tropline(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropline"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("u.txt"), "3\n3 3 1\n").unwrap();
    fs::write(dir.path().join("v.txt"), "3\n3 2 3\n").unwrap();
    fs::write(dir.path().join("bad.txt"), "3\n1 2 3\n").unwrap();
    fs::write(dir.path().join("broken.txt"), "3\n1 2\n").unwrap();
    fs::write(dir.path().join("u.nwk"), "((2:1/2,3:1/2):1,1:3/2);\n").unwrap();
    dir
}

#[test]
fn validate_reports_and_exit_codes() {
    let dir = workspace();
    let ok = tropline(&["validate", "u.txt"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("ultrametric: yes"));

    let bad = tropline(&["validate", "bad.txt"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("ultrametric: no; triple (1,2,3)"));

    let broken = tropline(&["validate", "broken.txt"], dir.path());
    assert_eq!(broken.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&broken.stderr).contains("line 2"));

    let nwk = tropline(&["validate", "u.nwk", "--format", "json"], dir.path());
    assert_eq!(nwk.status.code(), Some(0));
    assert_eq!(json(&nwk)["format"], "newick");
}

#[test]
fn segment_of_the_worked_example() {
    let dir = workspace();
    let out = tropline(&["segment", "u.txt", "v.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let points = report["turning_points"].as_array().unwrap();
    let lambdas: Vec<&str> = points.iter().map(|p| p["lambda"].as_str().unwrap()).collect();
    assert_eq!(lambdas, ["-2", "0", "1"]);
    assert_eq!(points[1]["newick"], "(1:0,2:0,3:0);");
    assert_eq!(points[1]["class"], "SingleNNI");
    assert_eq!(points[0]["raw"], serde_json::json!(["3", "3", "1"]));

    // Newick and vector inputs agree
    let mixed = json(&tropline(&["segment", "u.nwk", "v.txt"], dir.path()));
    assert_eq!(mixed["turning_points"].as_array().unwrap().len(), 3);

    let same = json(&tropline(&["segment", "u.txt", "u.txt"], dir.path()));
    let same = same["turning_points"].as_array().unwrap();
    assert_eq!(same.len(), 1);
    assert_eq!(same[0]["class"], "NoChange");
}

#[test]
fn decimal_flag_adds_columns() {
    let dir = workspace();
    let out = json(&tropline(&["segment", "u.txt", "v.txt", "--decimal"], dir.path()));
    assert_eq!(out["turning_points"][0]["lambda_decimal"], -2.0);
    let csv = stdout(&tropline(&["segment", "u.txt", "v.txt", "--format", "csv", "--decimal"], dir.path()));
    assert!(csv.lines().next().unwrap().ends_with("lambda_decimal"));
}

#[test]
fn worst_case_files_and_segment() {
    let dir = workspace();
    assert!(tropline(&["worst-case", "3", "--out", "w3"], dir.path()).status.success());
    assert_eq!(fs::read_to_string(dir.path().join("w3/u.txt")).unwrap(), "3\n6 6 3\n");
    assert_eq!(fs::read_to_string(dir.path().join("w3/v.txt")).unwrap(), "3\n1 2 2\n");

    assert!(tropline(&["worst-case", "6", "--out", "w6"], dir.path()).status.success());
    let report = json(&tropline(&["segment", "w6/u.txt", "w6/v.txt"], dir.path()));
    let points = report["turning_points"].as_array().unwrap();
    assert_eq!(points.len(), 15);
    assert_eq!(points.iter().filter(|p| p["class"] == "SingleNNI").count(), 10);

    let tnni = json(&tropline(&["tnni", "w6/u.txt", "w6/v.txt"], dir.path()));
    assert_eq!(tnni["tropical_nni_number"], 10);
    assert_eq!(tnni["tropical_interchange_number"], 15);
    assert_eq!(tnni["nni_distance"], 4);

    let classify = tropline(&["classify", "w6/u.txt", "w6/v.txt"], dir.path());
    assert_eq!(classify.status.code(), Some(0));
    assert_eq!(json(&classify)["inconsistent_moves"], 0);
}

#[test]
fn count_table() {
    let dir = workspace();
    let out = stdout(&tropline(&["count", "5"], dir.path()));
    let row = out.lines().find(|l| l.starts_with("5,")).unwrap();
    assert_eq!(row, "5,14,14,56,56,10,0");
    let rows = json(&tropline(&["count", "12", "--format", "json"], dir.path()));
    assert_eq!(rows[11]["planar_formula"], "58786");
    assert!(rows[11]["planar_enumerated"].is_null());
}

#[test]
fn random_pair_is_reproducible() {
    let dir = workspace();
    let a = stdout(&tropline(&["random-pair", "8", "--seed", "5"], dir.path()));
    let b = stdout(&tropline(&["random-pair", "8", "--seed", "5"], dir.path()));
    let c = stdout(&tropline(&["random-pair", "8", "--seed", "6"], dir.path()));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(tropline(&["random-pair", "8", "--out", "pair"], dir.path()).status.success());
    let seg = tropline(&["classify", "pair/t1.nwk", "pair/t2.nwk"], dir.path());
    assert_eq!(seg.status.code(), Some(0));
    assert_eq!(json(&seg)["generic_pair"], true);
}

fn without_seconds(csv: &str) -> Vec<String> {
    csv.lines().map(|l| l[..l.rfind(',').unwrap()].to_string()).collect()
}

#[test]
fn experiment_rows_respect_the_bound_and_reproduce() {
    let dir = workspace();
    let args = ["experiment", "8", "16", "--trials", "2000", "--seed", "1", "--out", "a.csv"];
    assert!(tropline(&args, dir.path()).status.success());
    let a = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    for row in a.lines().skip(1) {
        let cols: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(cols[2] <= cols[5], "mean above bound: {row}");
    }
    let sidecar_a = fs::read_to_string(dir.path().join("a.json")).unwrap();

    let threaded = Command::new(env!("CARGO_BIN_EXE_tropline"))
        .args(["experiment", "8", "16", "--trials", "2000", "--seed", "1", "--out", "b.csv"])
        .env("TROPLINE_THREADS", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(threaded.status.success());
    let b = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(without_seconds(&a), without_seconds(&b));
    assert_eq!(sidecar_a, fs::read_to_string(dir.path().join("b.json")).unwrap());
    let sidecar: Value = serde_json::from_str(&sidecar_a).unwrap();
    assert_eq!(sidecar["seed"], 1);
    assert!(sidecar["rows"][0]["bound_exact"].as_str().unwrap().contains('/'));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = workspace();
    for args in [
        &["frobnicate"][..],
        &["experiment", "8", "--trials", "3"],
        &["segment", "u.txt"],
        &["count", "0"],
        &["worst-case", "2"],
    ] {
        assert_eq!(tropline(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(tropline(&["segment", "u.txt", "missing.txt"], dir.path()).status.code(), Some(1));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn toroidal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toroidal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(cmd: &str, name: &str) -> Output {
    toroidal(&[cmd, fixture(name).to_str().unwrap()])
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn rays(doc: &Value) -> Vec<Vec<i64>> {
    let mut all: Vec<Vec<i64>> = doc["cones"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["rays"].as_array().unwrap().clone())
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
        .collect();
    all.sort();
    all.dedup();
    all
}

#[test]
fn resolve_smooth_fan_is_identity() {
    let o = run_on("resolve", "smooth_fan.json");
    assert_eq!(o.status.code(), Some(0));
    let input: Value = serde_json::from_str(&std::fs::read_to_string(fixture("smooth_fan.json")).unwrap()).unwrap();
    assert_eq!(rays(&stdout_json(&o)), rays(&input));
    let report = String::from_utf8(o.stderr).unwrap();
    assert!(report.contains("\"steps\":0"));
}

#[test]
fn resolve_a4_cone() {
    let o = run_on("resolve", "a4_cone.json");
    assert_eq!(o.status.code(), Some(0));
    let expected: Vec<Vec<i64>> = (0..=5).map(|j| vec![1, j]).collect();
    assert_eq!(rays(&stdout_json(&o)), expected);
}

#[test]
fn simplicialize_square() {
    let o = run_on("simplicialize", "square_cone.json");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["cones"].as_array().unwrap().len(), 2);
}

#[test]
fn torify_sign_action() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z2.json");
    let o = toroidal(&[
        "torify",
        fixture("z2_situs.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("z2.trace.json")).unwrap()).unwrap();
    let charts = report["charts"].as_array().unwrap();
    assert_eq!(charts.len(), 2);
    assert!(charts.iter().all(|c| c["verdict"] == "toroidal"));
    assert_eq!(report["ideal"], serde_json::json!([[0, 1], [1, 0]]));
    assert!(charts
        .iter()
        .any(|c| c["invariant_coordinate"] == serde_json::json!([-1, 1])));
}

#[test]
fn torify_order_three() {
    assert_eq!(run_on("torify", "z3_situs.json").status.code(), Some(0));
}

#[test]
fn separate_node_models() {
    let o = run_on("separate", "node_k2.json");
    assert_eq!(o.status.code(), Some(0));
    assert!(rays(&stdout_json(&o)).contains(&vec![1, 1]));
    assert_eq!(run_on("separate", "node_switch.json").status.code(), Some(0));
}

#[test]
fn quotient_by_sign() {
    let o = run_on("quotient", "quotient_half.json");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["multiplicity"], 2);
}

#[test]
fn hj_subcommand() {
    let o = toroidal(&["hj", "5", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["rays"], serde_json::json!([[1, 0], [3, -1]]));
    assert_eq!(toroidal(&["hj", "6", "2"]).status.code(), Some(2));
    assert_eq!(toroidal(&["hj", "five", "2"]).status.code(), Some(2));
}

#[test]
fn validate_reports() {
    let ok = run_on("validate", "smooth_fan.json");
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), "OK\n");

    let prim = run_on("validate", "nonprimitive_fan.json");
    assert_eq!(prim.status.code(), Some(1));
    assert!(String::from_utf8(prim.stdout).unwrap().contains("not primitive"));

    let overlap = run_on("validate", "overlapping_fan.json");
    assert_eq!(overlap.status.code(), Some(1));
    assert!(String::from_utf8(overlap.stdout).unwrap().contains("overlap"));

    for name in ["noninjective_situs.json", "quotient_noninjective.json"] {
        let o = run_on("validate", name);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(String::from_utf8(o.stdout).unwrap().contains("faithfully"), "{name}");
    }
    assert_eq!(run_on("validate", "conflicting_psi_situs.json").status.code(), Some(1));
    assert_eq!(run_on("validate", "z2_situs.json").status.code(), Some(0));
    assert_eq!(run_on("validate", "node_k2.json").status.code(), Some(0));
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(run_on("resolve", "missing_schema.json").status.code(), Some(2));
    assert_eq!(run_on("resolve", "malformed.json").status.code(), Some(2));
    assert_eq!(run_on("resolve", "nonprimitive_fan.json").status.code(), Some(2));
    assert_eq!(run_on("resolve", "overlapping_fan.json").status.code(), Some(2));
    assert_eq!(run_on("torify", "noninjective_situs.json").status.code(), Some(2));
    assert_eq!(run_on("torify", "conflicting_psi_situs.json").status.code(), Some(2));
    assert_eq!(run_on("quotient", "quotient_noninjective.json").status.code(), Some(2));
    assert_eq!(run_on("validate", "malformed.json").status.code(), Some(2));
    // --trace needs somewhere to put the trace
    let o = toroidal(&["resolve", fixture("a4_cone.json").to_str().unwrap(), "--trace"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(toroidal(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_3() {
    assert_eq!(run_on("torify", "rank6_situs.json").status.code(), Some(3));
    assert_eq!(run_on("resolve", "big_entries_fan.json").status.code(), Some(3));
}

#[test]
fn verification_failures_exit_1() {
    let o = run_on("torify", "x_only_situs.json");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("pre-toroidal only"));
}

#[test]
fn io_errors_exit_4() {
    assert_eq!(run_on("resolve", "no_such_file.json").status.code(), Some(4));
    let o = toroidal(&[
        "resolve",
        fixture("a4_cone.json").to_str().unwrap(),
        "--out",
        "/nonexistent-dir/out.json",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}.json"));
        let o = toroidal(&[
            "resolve",
            fixture("square_cone.json").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--trace",
        ]);
        assert_eq!(o.status.code(), Some(0));
        outputs.push((
            std::fs::read(&out).unwrap(),
            std::fs::read(dir.path().join(format!("run{i}.trace.json"))).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn directory_input_with_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("resolved");
    let o = toroidal(&[
        "resolve",
        fixture("corpus").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--jobs",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["a.json", "b.json", "c.json"]);
    let serial = run_on("resolve", "corpus/c.json");
    assert_eq!(std::fs::read(out.join("c.json")).unwrap(), serial.stdout);
}

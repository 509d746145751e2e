use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const MU4_INVERSION: &str = r#"{
  "gamma": {"family": "cyclic", "n": 2},
  "base": {"family": "cyclic", "n": 4},
  "action": [[0, 1, 2, 3], [0, 3, 2, 1]]
}"#;

const TRIVIAL: &str = r#"{
  "gamma": {"order": 1, "table": [[0]]},
  "base": {"order": 1, "table": [[0]]},
  "action": [[0]]
}"#;

fn cocycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocycle"))
        .args(args)
        .env_remove("COCYCLE_MAX_MEM_MB")
        .output()
        .unwrap()
}

fn fixture(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn h1_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let mu4 = fixture(dir.path(), "mu4.json", MU4_INVERSION);
    let report = json(&cocycle(&["h1", "--input", &mu4]));
    assert_eq!(report["classes"], 2);
    assert_eq!(report["seed"], 0);
    let trivial = fixture(dir.path(), "trivial.json", TRIVIAL);
    assert_eq!(json(&cocycle(&["h1", "--input", &trivial]))["classes"], 1);
}

#[test]
fn h1_with_central_subgroup_reports_h2() {
    let dir = tempfile::tempdir().unwrap();
    let text = MU4_INVERSION.replace("\"action\"", "\"central\": [0, 2],\n  \"action\"");
    let path = fixture(dir.path(), "ext.json", &text);
    let report = json(&cocycle(&["h1", "--input", &path]));
    assert!(report["h2"]["h2_factors"].is_array());
}

#[test]
fn oversized_input_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture(dir.path(), "big.json", MU4_INVERSION);
    let out = cocycle(&["h1", "--input", &path, "--max-group-order", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = cocycle(&["etale", "--group", "symmetric:9", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_json_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture(
        dir.path(),
        "bad.json",
        "{\n  \"gamma\": {\"family\": \"cyclic\", \"n\": 2},\n  \"base\": [\n",
    );
    let out = cocycle(&["h1", "--input", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(cocycle(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cocycle(&["quad", "--d", "4"]).status.code(), Some(1));
    assert_eq!(
        cocycle(&["verify", "--suite", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(cocycle(&["--help"]).status.code(), Some(0));
}

#[test]
fn etale_row_counts() {
    let rows = |args: &[&str]| json(&cocycle(args))["classes"].as_array().unwrap().len();
    assert_eq!(rows(&["etale", "--group", "cyclic:2", "--m", "2"]), 2);
    assert_eq!(rows(&["etale", "--group", "cyclic:1", "--m", "3"]), 1);
    let report = json(&cocycle(&[
        "etale", "--group", "cyclic:4", "--m", "4", "--tower", "3,1,4",
    ]));
    let classes = report["classes"].as_array().unwrap();
    // Hom(Z/4, S_4)/conj has four classes; an m-cycle's order must divide 4.
    assert_eq!(classes.len(), 4);
    let mut shapes: Vec<Value> = classes
        .iter()
        .map(|c| c["realization"]["factor_degrees"].clone())
        .collect();
    shapes.sort_by_key(|v| v.to_string());
    let expected: Vec<Value> = ["[1,1,1,1]", "[2,1,1]", "[2,2]", "[4]"]
        .iter()
        .map(|s| serde_json::from_str(s).unwrap())
        .collect();
    assert_eq!(shapes, expected);
}

#[test]
fn etale_from_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture(
        dir.path(),
        "z2.json",
        r#"{"order": 2, "table": [[0,1],[1,0]]}"#,
    );
    let report = json(&cocycle(&["etale", "--input", &path, "--m", "2"]));
    assert_eq!(report["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_suites_pass() {
    for suite in ["hilbert90", "units", "all"] {
        let report = json(&cocycle(&["verify", "--suite", suite]));
        assert_eq!(report["passed"], true, "{suite}");
        assert_eq!(report["failed"], 0);
    }
}

#[test]
fn single_computations() {
    let r = json(&cocycle(&["hilbert90", "--p", "2", "--n", "2", "--m", "2"]));
    assert_eq!(r["cocycles"], 30);
    assert_eq!(r["passed"], true);
    let r = json(&cocycle(&["quad", "--d", "5"]));
    assert_eq!(r["matched"], true);
    assert_eq!(r["h1_order"], 2);
    let dir = tempfile::tempdir().unwrap();
    let path = fixture(
        dir.path(),
        "form.json",
        r#"{"p":3,"d":1,"n":2,"dim":2,"type":[2,0],"coeffs":[[1],[0],[0],[1]]}"#,
    );
    let r = json(&cocycle(&["forms", "--input", &path]));
    assert_eq!(r["direct_count"], 2);
    assert_eq!(r["cohomological_count"], 2);
}

#[test]
fn output_is_deterministic_and_records_seed() {
    let args = ["verify", "--suite", "all", "--seed", "17"];
    let a = cocycle(&args);
    let b = cocycle(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 17);
    let tsv = cocycle(&[
        "etale", "--group", "cyclic:2", "--m", "2", "--format", "tsv", "--seed", "5",
    ]);
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert!(text.starts_with("# seed\t5\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = cocycle(&["quad", "--d", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["d"], 1);
}

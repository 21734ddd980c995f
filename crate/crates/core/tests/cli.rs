mod common;

use std::process::{Command, Output};

use common::*;
use serde_json::Value;

fn finq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finq")).args(args).env_remove("FINQ_CAP").output().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn json_stderr(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

fn s3_path() -> String {
    fixture_path("s3/group.json").to_str().unwrap().to_string()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn born_matches_golden_bytes() {
    let out = finq(&["born", &s3_path(), "--component", "2", "--n", "1,1,2", "--m", "1,3,2"]);
    assert!(out.status.success());
    let golden = std::fs::read(fixture_path("s3/born_cli.json")).unwrap();
    assert_eq!(out.stdout, golden);
    let out = finq(&["born", &s3_path(), "--n", "1,1,2", "--m", "1,3,2"]);
    assert_eq!(json_stdout(&out)["probability"], "16/21");
}

#[test]
fn char_table_matches_reference_table() {
    let v = json_stdout(&finq(&["char-table", &s3_path()]));
    assert_eq!(v["group_order"], 6);
    assert_eq!(v["dims"], serde_json::json!([1, 1, 2]));
    let fx = fixture("s3/character_table.json");
    let classes = fixture("s3/classes.json");
    // Reference column label of each reported class, matched by class size and cycle type.
    let g = s3();
    let labels: Vec<String> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let rep = c["representative"].as_str().unwrap();
            classes["classes"]
                .as_object()
                .unwrap()
                .iter()
                .find(|(_, members)| {
                    members
                        .as_array()
                        .unwrap()
                        .iter()
                        .any(|m| g.element(g.index_of(&perm_from_cycles(3, m)).unwrap()).to_string() == rep)
                })
                .unwrap()
                .0
                .clone()
        })
        .collect();
    let cols: Vec<&str> = fx["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let mut got: Vec<Vec<i64>> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            cols.iter()
                .map(|c| {
                    let k = labels.iter().position(|l| l == c).unwrap();
                    let x = &row[k];
                    assert_eq!(x["order"], 1, "rational entries serialise over Q");
                    x["coeffs"][0][0].as_str().unwrap().parse::<i64>().unwrap()
                })
                .collect()
        })
        .collect();
    let mut want: Vec<Vec<i64>> = serde_json::from_value(fx["rows"].clone()).unwrap();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn interfere_contains_reference_pair() {
    let v = json_stdout(&finq(&["interfere", &s3_path(), "--bound", "3", "--component", "2"]));
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(v["count"].as_u64().unwrap() as usize, pairs.len());
    assert!(pairs.contains(&serde_json::json!([[1, 1, 2], [1, 3, 2]])));
}

#[test]
fn group_info_reports_class_data() {
    let v = json_stdout(&finq(&["group-info", &s3_path()]));
    assert_eq!(v["order"], 6);
    let sizes: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![1, 2, 3]);
    assert_eq!(v["class_coefficients"][2][2], serde_json::json!([3, 3, 0]));
}

#[test]
fn decompose_reports_multiplicities() {
    let v = json_stdout(&finq(&["decompose", &s3_path()]));
    assert_eq!(v["multiplicities"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["conjugated"].as_array().unwrap().len(), 6);
}

#[test]
fn gates_closure_one_qubit() {
    let v = json_stdout(&finq(&["gates-closure", fixture_path("gates/one_qubit.json").to_str().unwrap()]));
    assert_eq!(v["order"], 192);
    assert_eq!(v["complete"], true);
    assert_eq!(v["verification"]["products_closed"], true);
}

#[test]
fn third_turn_phase_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "g.json",
        r#"{"gates":[{"kind":"hadamard","wire":0,"wires":1},{"kind":"phase","theta":"1/3","wire":0,"wires":1}],"cap":50}"#,
    );
    let out = finq(&["gates-closure", &path]);
    assert_eq!(out.status.code(), Some(3), "H with a third-turn phase is infinite");
    let e = json_stderr(&out);
    assert_eq!(e["error"]["code"], "cap_exceeded");
    assert_eq!(e["error"]["detail"]["field_order"], 24);
    assert!(e["error"]["detail"]["growth"].as_array().is_some());
}

#[test]
fn cap_from_environment() {
    let one = fixture_path("gates/one_qubit.json");
    let out = Command::new(env!("CARGO_BIN_EXE_finq"))
        .args(["gates-closure", one.to_str().unwrap()])
        .env("FINQ_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_finq"))
        .args(["gates-closure", one.to_str().unwrap(), "--cap", "1000"])
        .env("FINQ_CAP", "10")
        .output()
        .unwrap();
    assert!(out.status.success(), "the flag overrides the environment");
}

#[test]
fn dynamics_check_scenario() {
    let v = json_stdout(&finq(&["dynamics-check", fixture_path("dynamics/wreath.json").to_str().unwrap()]));
    assert_eq!(v["order"], 8);
    assert_eq!(v["order_matches"], true);
    assert_eq!(v["closure_idempotent"], true);
    assert_eq!(v["projection_homomorphism"], true);
    let evs = v["evolutions"].as_array().unwrap();
    assert_eq!(evs[0]["t_final"], 3);
    let support = evs[1]["support"].as_array().unwrap();
    assert_eq!(support.len(), 1, "permutation dynamics keeps a basis state a basis state");
}

#[test]
fn schema_errors_carry_pointers() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "g.json", r#"{"type":"permutation","degree":3}"#);
    let out = finq(&["group-info", &path]);
    assert_eq!(out.status.code(), Some(2));
    let e = json_stderr(&out);
    assert_eq!(e["error"]["code"], "schema_error");
    assert!(e["error"]["message"].as_str().unwrap().contains("generators"));
    let path = write_temp(&dir, "h.json", r#"{"type":"permutation","degree":3,"generators":[[1,2,2]]}"#);
    let e = json_stderr(&finq(&["group-info", &path]));
    assert_eq!(e["error"]["pointer"], "/generators/0");
    let path = write_temp(&dir, "bad.json", "{not json");
    let out = finq(&["group-info", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_stderr(&out)["error"]["code"], "malformed_json");
}

#[test]
fn failures_leave_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = finq(&[
        "born",
        &s3_path(),
        "--component",
        "2",
        "--n",
        "1,1,1",
        "--m",
        "1,3,2",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_stderr(&out)["error"]["code"], "invisible_in_component");
    assert!(!target.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    let out = finq(&["born", &s3_path(), "--n", "1,1,2", "--m", "1,3,2", "--output", target.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), "{\"probability\":\"16/21\"}\n");
}

#[test]
fn usage_errors() {
    assert_eq!(finq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(finq(&["born", &s3_path(), "--n", "1,2"]).status.code(), Some(2));
    assert_eq!(finq(&["interfere", &s3_path(), "--component", "7"]).status.code(), Some(2));
    assert_eq!(finq(&["char-table", "/nonexistent/file.json"]).status.code(), Some(2));
    assert!(finq(&["--help"]).status.success());
}

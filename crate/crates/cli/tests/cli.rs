use std::fs;

use assert_cmd::Command;
use serde_json::Value;

fn obstruct() -> Command {
    let mut cmd = Command::cargo_bin("obstruct").unwrap();
    cmd.env_remove("OBSTRUCT_TIME_LIMIT");
    cmd
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = obstruct().args(args).arg("--json").output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

#[test]
fn info_csaszar() {
    let (code, v) = json(&["info", "--builtin", "csaszar", "--dim", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["f_vector"], serde_json::json!([7, 21, 14]));
    assert_eq!(v["cells"][2], 322);
    obstruct()
        .args(["info", "--builtin", "csaszar"])
        .assert()
        .success()
        .stdout(predicates::str::contains("(7, 21, 14)"))
        .stdout(predicates::str::contains("dim-2 cells: 322"));
}

#[test]
fn rp2_novik_is_infeasible() {
    let (code, v) = json(&["check", "--builtin", "rp2", "--dim", "3", "--system", "novik"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "infeasible");
}

#[test]
fn bipyramid_full_is_feasible_and_writes_solution() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.json");
    let (code, v) = json(&[
        "check",
        "--builtin",
        "bipyramid",
        "--dim",
        "3",
        "--system",
        "full",
        "--solution",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "feasible");
    let a: Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(a.as_object().unwrap().len() as u64, v["model"]["variables"].as_u64().unwrap());
}

#[test]
fn timeout_exit_code() {
    obstruct()
        .args(["check", "--builtin", "m2-10", "--dim", "3", "--system", "full"])
        .env("OBSTRUCT_TIME_LIMIT", "0")
        .assert()
        .code(3);
}

#[test]
fn generate_writes_lp_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("c.lp");
    let report = dir.path().join("c.json");
    obstruct()
        .args(["generate", "--builtin", "csaszar", "--dim", "3", "--system", "minimal", "--out"])
        .arg(&lp)
        .arg("--report")
        .arg(&report)
        .assert()
        .success();
    let text = fs::read_to_string(&lp).unwrap();
    assert!(text.contains("Subject To") && text.trim_end().ends_with("End"));
    let r: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["command"], "generate");
    assert_eq!(r["model"]["symmetry_reduction"], true);
    assert!(r["model"]["variables"].as_u64().unwrap() > 0);

    let (_, plain) = json(&["generate", "--builtin", "csaszar", "--system", "minimal", "--out", lp.to_str().unwrap()]);
    let (_, full) = json(&[
        "generate",
        "--builtin",
        "csaszar",
        "--system",
        "minimal",
        "--no-symmetry-reduction",
        "--out",
        lp.to_str().unwrap(),
    ]);
    assert!(full["model"]["variables"].as_u64() > plain["model"]["variables"].as_u64());
}

#[test]
fn complex_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    fs::write(&path, r#"{"name": "tri", "num_vertices": 4, "facets": [[1, 2, 3], [2, 3, 4]], "one_based": true}"#).unwrap();
    let (code, v) = json(&["info", "--complex", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["instance"], "tri");
    assert_eq!(v["f_vector"], serde_json::json!([4, 5, 2]));
}

#[test]
fn data_and_usage_errors_exit_2() {
    obstruct().args(["info", "--builtin", "torus"]).assert().code(2);
    obstruct().args(["info"]).assert().code(2);
    obstruct().args(["frobnicate"]).assert().code(2);
    obstruct().args(["check", "--builtin", "rp2", "--system", "bogus"]).assert().code(2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"num_vertices": 3, "facets": [[0, 1, 7]]}"#).unwrap();
    obstruct().args(["info", "--complex", path.to_str().unwrap()]).assert().code(2);
    obstruct().args(["info", "--complex", "/nonexistent/k.json"]).assert().code(2);
}

#[test]
fn oracle_suites() {
    let (code, v) = json(&["oracle", "--vertices", "5", "--dim", "2", "--trials", "2", "--seed", "3", "--suite", "fundamental"]);
    assert_eq!(code, 0);
    assert_eq!(v["oracle"]["violations"], serde_json::json!([]));
    assert_eq!(v["seed"], 3);
    for suite in ["bounds", "cyclic", "system"] {
        obstruct()
            .args(["oracle", "--vertices", "5", "--dim", "3", "--trials", "2", "--suite", suite])
            .assert()
            .success();
    }
    obstruct().args(["oracle", "--vertices", "5", "--dim", "2", "--suite", "nope"]).assert().code(2);
}

#[test]
fn same_seed_same_oracle_report() {
    let args = ["oracle", "--vertices", "4", "--dim", "2", "--trials", "3", "--seed", "11", "--suite", "bounds"];
    let (_, mut a) = json(&args);
    let (_, mut b) = json(&args);
    a["wall_ms"] = Value::Null;
    b["wall_ms"] = Value::Null;
    assert_eq!(a, b);
}

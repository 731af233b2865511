use std::io::Write;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_seifert-floer")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut with = args.to_vec();
    with.push("--json");
    let (code, out, _) = run(&with);
    (code, serde_json::from_str(&out).unwrap())
}

fn job_path(name: &str) -> String {
    format!("{}/../../jobs/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Every listed JSON value appears verbatim in the human rendering.
fn assert_same_numbers(human: &str, values: &[&Value]) {
    for v in values {
        let t = text(v);
        assert!(human.contains(&t), "{} missing from\n{}", t, human);
    }
}

#[test]
fn flat_lists_connections() {
    let (code, out, _) = run(&["flat", "2", "3", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("71/120") && out.contains("119/120"));
    let (_, v) = json(&["flat", "2", "3", "5"]);
    let conns = v["connections"].as_array().unwrap();
    assert_eq!(conns.len(), 2);
    for c in conns {
        assert_same_numbers(&out, &[&c["cs_value"], &c["e_label"], &c["grading"]]);
    }
}

#[test]
fn invalid_seifert_data_exits_2() {
    let (code, _, err) = run(&["flat", "2", "4", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("coprime"));
    assert_eq!(run(&["flat", "2", "3"]).0, 2);
    assert_eq!(run(&["cs", "2", "3", "x"]).0, 2);
}

#[test]
fn flat_gradings_odd_for_k12() {
    let (_, v) = json(&["grading", "2", "3", "71"]);
    assert_eq!(v["even"], 0);
    assert_eq!(v["odd"], 24);
}

#[test]
fn cs_lists_trivial_and_values() {
    let (code, out, _) = run(&["cs", "2", "3", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("47/168") && out.contains("143/168"));
    let (_, v) = json(&["cs", "2", "3", "7"]);
    assert_eq!(v["trivial"], "0");
}

#[test]
fn obstruct_exit_codes() {
    assert_eq!(run(&["obstruct", "2", "3", "11", "--assume-froyshov"]).0, 0);
    assert_eq!(run(&["obstruct", "2", "3", "11"]).0, 1);
    assert_eq!(run(&["obstruct", "2", "4", "11"]).0, 2);
    assert_eq!(run(&["obstruct", "2", "3", "11", "--assume-froyshov", "--r", "1/0"]).0, 2);
    // 95/264 is a critical level
    assert_eq!(run(&["obstruct", "2", "3", "11", "--assume-froyshov", "--r", "95/264"]).0, 2);
    assert_eq!(run(&["obstruct", "2", "3", "11", "--assume-froyshov", "--r", "1/2"]).0, 1);
}

#[test]
fn obstruct_json_matches_human() {
    let args = ["obstruct", "2", "3", "5", "--x", "product", "--assume-froyshov"];
    let (code, human, _) = run(&args);
    assert_eq!(code, 1);
    let (_, v) = json(&args);
    assert_eq!(v["window"]["r_max"], "1/120");
    assert_eq!(v["window"]["l_y"], 3);
    let w = &v["window"];
    let mut values = vec![&w["r_max"], &w["l_y"], &w["cover_length"], &w["q"]];
    values.extend(w["excluded"].as_array().unwrap());
    values.extend(v["tested"].as_array().unwrap().iter().map(|t| &t["r"]));
    assert_same_numbers(&human, &values);
}

#[test]
fn sweep_rows_and_range() {
    let (code, human, _) = run(&["sweep-example", "1", "3"]);
    assert_eq!(code, 0);
    let (_, v) = json(&["sweep-example", "1", "3"]);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["verdict"], "obstructed");
        assert_same_numbers(&human, &[&row["k"], &row["connections"], &row["odd"], &row["l_y"], &row["r_max"]]);
    }
    assert_eq!(run(&["sweep-example", "0", "3"]).0, 2);
    assert_eq!(run(&["sweep-example", "5", "3"]).0, 2);
    assert_eq!(run(&["sweep-example", "1", "65"]).0, 2);
    let (_, v) = json(&["sweep-example", "13", "13"]);
    assert_eq!(v["rows"][0]["multiplicities"], serde_json::json!([2, 3, 77]));
}

#[test]
fn committed_jobs() {
    assert_eq!(run(&["obstruct", "--input", &job_path("obstruct_sigma_2_3_11.json")]).0, 0);
    assert_eq!(run(&["obstruct", "--input", &job_path("obstruct_product_sigma_2_3_5.json")]).0, 1);
    let (code, v) = json(&["obstruct", "--input", &job_path("explicit_complex.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["tested"][0]["outcome"]["certificate"]["route"]["kind"], "dual-witness");
}

#[test]
fn input_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, r#"{{"command":"homology","y":{{"seifert":[2,3,7]}},"r":"1/2"}}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["homology", "--input", p]);
    assert_eq!(code, 0);
    assert!(out.contains("HF^3 = Z"));
    assert_eq!(run(&["flat", "--input", p]).0, 2);
    assert_eq!(run(&["homology", "--input", p, "2", "3", "5"]).0, 2);

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["homology", "--input", p]).0, 2);
    assert_eq!(run(&["homology", "--input", "/nonexistent/job.json"]).0, 2);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["sweep-example", "1", "4", "--json"]).1;
    let b = run(&["sweep-example", "1", "4", "--json"]).1;
    assert_eq!(a, b);
}

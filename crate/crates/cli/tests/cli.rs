use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qfuzzy"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qfuzzy");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok_json(args: &[&str], stdin: &str) -> Value {
    let out = run(args, stdin);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fails(args: &[&str], stdin: &str, code: i32) -> String {
    let out = run(args, stdin);
    assert_eq!(out.status.code(), Some(code), "stdout: {}", String::from_utf8_lossy(&out.stdout));
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn amplitudes(v: &Value) -> Vec<[f64; 2]> {
    v["amplitudes"].as_array().unwrap().iter().map(|a| [a[0].as_f64().unwrap(), a[1].as_f64().unwrap()]).collect()
}

#[test]
fn encode_crisp_and_uniform_sets() {
    let crisp = ok_json(&["encode"], r#"{"universe_size":2,"memberships":[1,0]}"#);
    assert_eq!(amplitudes(&crisp), vec![[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]);
    assert_eq!(crisp["layout"], serde_json::json!([["value", 1, 2]]));

    let half = ok_json(&["encode"], r#"{"universe_size":2,"memberships":[0.5,0.5]}"#);
    for [re, im] in amplitudes(&half) {
        assert!((re - 0.5).abs() < 1e-12 && im == 0.0);
    }
}

#[test]
fn encode_rejects_bad_input() {
    let err = fails(&["encode"], r#"{"universe_size":1,"memberships":[1.5]}"#, 2);
    assert!(err.contains("membership 1.5 of element 1 is outside [0, 1]"), "{err}");
    let err = fails(&["encode"], "{not json", 2);
    assert!(err.starts_with("error: invalid fuzzy set"), "{err}");
    let err = fails(&["encode", "--input", "/nonexistent/set.json"], "", 2);
    assert!(err.contains("cannot read /nonexistent/set.json"), "{err}");
}

#[test]
fn encode_respects_the_qubit_cap() {
    let err = fails(&["encode", "--qubit-cap", "2"], r#"{"universe_size":3,"memberships":[0,0,0]}"#, 3);
    assert_eq!(err.trim(), "error: requested 3 qubits but the register cap is 2");
}

#[test]
fn eval_matches_golden_output() {
    for name in ["and_pipeline", "defuz_pipeline"] {
        let input = golden(&format!("{name}.json"));
        let out = run(&["eval", "--input", input.to_str().unwrap()], "");
        assert_eq!(out.status.code(), Some(0));
        let expected = std::fs::read_to_string(golden(&format!("{name}.out.json"))).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{name}");
    }
    let input = golden("defuz_pipeline.json");
    let out = run(&["eval", "--input", input.to_str().unwrap(), "--mode", "classical"], "");
    let expected = std::fs::read_to_string(golden("defuz_pipeline.classical.out.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn eval_and_in_both_modes() {
    let spec = r#"{"universe_size":1,"sets":{"A":[0.5],"B":[0.5]},"expression":"A AND B","mode":"classical","seed":42,"trials":100}"#;
    let classical = ok_json(&["eval"], spec);
    assert_eq!(floats(&classical["result"]["memberships"]), vec![0.25]);

    let quantum = ok_json(&["eval", "--mode", "quantum"], spec);
    assert_eq!(quantum["mode"], "quantum");
    assert_eq!(quantum["result"]["kind"], "quantum_state");
    let m = floats(&quantum["result"]["value_marginals"]);
    assert!((m[0] - 0.25).abs() < 1e-10);
    assert_eq!(quantum["result"]["total_qubits"], 3);
}

#[test]
fn eval_flags_override_the_pipeline() {
    let spec = r#"{"universe_size":2,"sets":{"A":[0.3,0.9]},"expression":"DEFUZ(A)","mode":"quantum","seed":1,"trials":50}"#;
    let out = ok_json(&["eval", "--seed", "5", "--trials", "70"], spec);
    assert_eq!(out["seed"], 5);
    assert_eq!(out["trials"], 70);
    assert_eq!(out["result"]["distribution"]["counts"]["shots"], 70);
    let err = fails(&["eval", "--shots", "0"], spec, 2);
    assert!(err.contains("trials must be at least 1"));
}

#[test]
fn eval_expression_errors_exit_4() {
    let err = fails(&["eval"], r#"{"universe_size":1,"sets":{"A":[0.5]},"expression":"A AND C"}"#, 4);
    assert_eq!(err.trim(), "error: unbound identifier C at 1:7");
    let err = fails(&["eval"], r#"{"universe_size":1,"sets":{"A":[0.5]},"expression":"A AND"}"#, 4);
    assert_eq!(err.trim(), "error: syntax error at 1:6: expected an expression, found end of input");
    let err = fails(&["eval"], r#"{"universe_size":1,"sets":{"A":[0.5]},"expression":"SUPERPOSE(1 * A)"}"#, 4);
    assert!(err.contains("only available in quantum mode"));
}

#[test]
fn eval_validation_and_cap_errors() {
    let err = fails(&["eval"], r#"{"universe_size":2,"sets":{"A":[0.5]},"expression":"A"}"#, 2);
    assert!(err.contains("set A has 1 memberships but universe_size is 2"), "{err}");
    let err = fails(&["eval"], r#"{"universe_size":1,"sets":{"A":[-0.1]},"expression":"A"}"#, 2);
    assert!(err.contains("set A"), "{err}");
    let spec = r#"{"universe_size":2,"sets":{"A":[0.5,0.5]},"expression":"A AND A AND A","mode":"quantum","qubit_cap":8}"#;
    let err = fails(&["eval"], spec, 3);
    assert!(err.contains("the register cap is 8"), "{err}");
    ok_json(&["eval", "--qubit-cap", "10"], spec);
}

#[test]
fn output_is_byte_identical_across_runs_and_sinks() {
    let spec = r#"{"universe_size":3,"sets":{"A":[0.2,0.6,0.9],"B":[0.5,0.5,0.1]},"expression":"DEFUZ(A OR NOT B)","mode":"quantum","seed":11,"trials":20000}"#;
    let first = run(&["eval"], spec);
    let second = run(&["eval"], spec);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["eval", "--output", path.to_str().unwrap()], spec);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);

    let different = run(&["eval", "--seed", "12"], spec);
    assert_ne!(different.stdout, first.stdout);
}

#[test]
fn report_round_trips_an_encoded_set() {
    let encoded = run(&["encode"], r#"{"universe_size":2,"memberships":[0.3,0.7]}"#).stdout;
    let report = ok_json(&["report"], std::str::from_utf8(&encoded).unwrap());
    assert_eq!(report["is_product"], true);
    assert_eq!(report["per_qubit_schmidt_ranks"], serde_json::json!([1, 1]));
    let canon = floats(&report["canonical_fuzzy_set"]["memberships"]);
    assert!((canon[0] - 0.3).abs() < 1e-10 && (canon[1] - 0.7).abs() < 1e-10);
    assert_eq!(floats(&report["phases"]), vec![0.0, 0.0]);
}

#[test]
fn report_detects_entanglement_and_bloch_points() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = format!(r#"{{"amplitudes":[[{h},0],[0,0],[0,0],[{h},0]]}}"#);
    let report = ok_json(&["report"], &bell);
    assert_eq!(report["is_product"], false);
    assert_eq!(report["per_qubit_schmidt_ranks"], serde_json::json!([2, 2]));
    assert!(report["bloch_points"].is_null());

    let plus = format!(r#"{{"amplitudes":[[{h},0],[{h},0]]}}"#);
    let report = ok_json(&["report"], &plus);
    let p = &report["bloch_points"][0];
    assert!((p["x"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(p["y"].as_f64().unwrap().abs() < 1e-12);
    assert!(p["z"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn report_rejects_malformed_states() {
    fails(&["report"], r#"{"amplitudes":[[1,0],[0,0],[0,0]]}"#, 2);
    fails(&["report"], r#"{"amplitudes":[[1,0],[1,0]]}"#, 2);
    fails(&["report"], r#"{"amplitudes":[[1,0],[0,0]],"layout":[["value",1,2]]}"#, 2);
    fails(&["report"], r#"[1, 2]"#, 2);
}

#[test]
fn sample_counts_are_reproducible() {
    let crisp = ok_json(&["sample", "--shots", "500"], r#"{"amplitudes":[[0,0],[0,0],[1,0],[0,0]]}"#);
    assert_eq!(crisp["counts"], serde_json::json!({"10": 500}));

    let encoded = run(&["encode"], r#"{"universe_size":1,"memberships":[0.5]}"#).stdout;
    let state = std::str::from_utf8(&encoded).unwrap();
    let a = run(&["sample", "--shots", "100000", "--seed", "7"], state);
    let b = run(&["sample", "--shots", "100000", "--seed", "7"], state);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let ones = v["counts"]["1"].as_u64().unwrap() as f64;
    let sigma = (100_000.0f64 * 0.25).sqrt();
    assert!((ones - 50_000.0).abs() <= 3.0 * sigma, "{ones}");
    assert_eq!(v["shots"], 100_000);
    assert_eq!(v["seed"], 7);
}

#[test]
fn sample_defaults_and_validation() {
    let v = ok_json(&["sample"], r#"{"amplitudes":[[1,0],[0,0]]}"#);
    assert_eq!(v["shots"], 10_000);
    assert_eq!(v["seed"], 0);
    let err = fails(&["sample", "--shots", "0"], r#"{"amplitudes":[[1,0],[0,0]]}"#, 2);
    assert!(err.contains("shots must be at least 1"));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = run(&["encode", "--bogus"], "");
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["eval", "--mode", "fuzzy"], "");
    assert_eq!(out.status.code(), Some(2));
}

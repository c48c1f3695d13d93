//! The `toric` binary end to end: payloads on stdin or from files, exit
//! codes, schema pointers, batches and the emitted corpus.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn toric(args: &[&str], stdin: &str) -> (Value, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_toric"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let body = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (body, out.status.code().unwrap())
}

fn global_payload(lambda: &str) -> String {
    json!({
        "setup": {"d": -7, "n": 1, "mu": {"modulus": "7", "infinity_type": 1,
            "components": [{"prime": "7", "images": [{"generator": "zeta", "rotation": "1/2"}]}]}},
        "alphas": [{"modulus": "1", "infinity_type": 0, "components": []}],
        "beta": {"modulus": "1", "infinity_type": 0, "components": []},
        "lambda": [lambda],
        "l_values": [[0.5, 0.0]]
    })
    .to_string()
}

fn emit(dir: &Path, seed: &str) -> Value {
    let (body, code) =
        toric(&["emit-corpus", "--output", dir.to_str().unwrap(), "--per-setting", "1", "--primes", "3,5", "--seed", seed], "");
    assert_eq!(code, 0, "{body}");
    body
}

#[test]
fn emitted_corpus_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(emit(a.path(), "11")["count"], 24);
    emit(b.path(), "11");
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 25);
    for name in names {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name:?}");
    }
}

#[test]
fn emitted_instances_pass_the_sum_check() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "3");
    let manifest: Vec<Value> = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    for entry in manifest {
        let file = dir.path().join(entry["file"].as_str().unwrap());
        let (body, code) = toric(&["sum-check", "--input", file.to_str().unwrap()], "");
        assert_eq!(code, 0, "{body}");
        let total = body["total"].as_u64().unwrap();
        assert!(total <= 1);
        assert_eq!(total == 1, body["compatibility"].as_bool().unwrap(), "{}", entry["label"]);
        assert_eq!(total == 1, !body["support"].is_null());
    }
}

#[test]
fn unknown_field_is_a_schema_error_with_pointer() {
    let (body, code) = toric(&["find-lambda"], r#"{"d": -7, "targetz": []}"#);
    assert_eq!(code, 1);
    assert_eq!(body["error_kind"], "SchemaError");
    assert_eq!(body["pointer"], "/targetz");
    let (body, code) = toric(&["find-lambda"], r#"{"d": -7, "targets": [{"3": "minus"}]}"#);
    assert_eq!(code, 1);
    assert_eq!(body["pointer"], "/targets/0/3");
}

#[test]
fn odd_targets_report_the_parity_obstruction() {
    let (body, code) = toric(&["find-lambda"], r#"{"d": -7, "targets": [{"5": -1}]}"#);
    assert_eq!(code, 0);
    assert_eq!(body["error_kind"], "ParityObstruction");
}

#[test]
fn exhausted_search_is_a_numerical_failure() {
    let (body, code) = toric(&["find-lambda", "--search-bound", "2"], r#"{"d": -7, "targets": [{"3": -1, "5": -1}]}"#);
    assert_eq!(code, 2, "{body}");
    assert_eq!(body["error_kind"], "SearchExhausted");
}

#[test]
fn found_lambda_carries_its_checks() {
    let (body, code) = toric(&["find-lambda"], r#"{"d": -7, "targets": [{"3": -1, "inf": -1}]}"#);
    assert_eq!(code, 0);
    for check in body["checks"][0].as_array().unwrap() {
        assert_eq!(check["symbol"], check["target"]);
    }
    assert_eq!(body["product_formula"]["holds"], true);
}

#[test]
fn global_verdict_follows_lambda() {
    // (-1, -7) is -1 at 7 and at infinity, matching the root numbers there
    let (good, code) = toric(&["global-decide"], &global_payload("-1"));
    assert_eq!(code, 0, "{good}");
    assert_eq!(good["verdict"], true);
    let (bad, code) = toric(&["global-decide"], &global_payload("1"));
    assert_eq!(code, 0);
    assert_eq!(bad["verdict"], false);
    assert_eq!(bad["conditions"]["root_numbers"], false);
}

#[test]
fn batch_keeps_order_and_reports_the_worst_exit() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let tasks = json!([
        {"command": "find-lambda", "payload": {"d": -7, "targets": [{}]}},
        {"command": "find-lambda", "payload": {"d": -7, "targetz": []}},
        {"command": "find-lambda", "payload": {"d": -7, "targets": [{"3": -1, "5": -1}]}, "options": {"search_bound": 2}},
    ]);
    fs::write(file.path(), tasks.to_string()).unwrap();
    let (body, code) = toric(&["--batch", file.path().to_str().unwrap()], "");
    assert_eq!(code, 2);
    let bodies = body.as_array().unwrap();
    assert_eq!(bodies[0]["lambda"], json!(["1"]));
    assert_eq!(bodies[1]["error_kind"], "SchemaError");
    assert_eq!(bodies[2]["error_kind"], "SearchExhausted");
}

#[test]
fn missing_command_is_an_input_error() {
    let (body, code) = toric(&[], "");
    assert_eq!(code, 1);
    assert_eq!(body["error_kind"], "InputError");
}

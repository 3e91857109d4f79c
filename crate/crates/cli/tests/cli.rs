use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("csa-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn csa(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_csa")).args(args).output().unwrap();
    let report: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not one JSON document ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), report)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn hamilton_does_not_split() {
    let f = fixture("quaternions.json");
    let (code, r) = csa(&["split", "--file", f.to_str().unwrap(), "--algebra", "Q8"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "no");
    assert_eq!(r["certificate"]["kind"], "local_obstruction");
    assert!(r["witness"].is_null());
}

#[test]
fn split_witness_round_trips_through_verify() {
    let f = fixture("quaternions.json");
    let (code, r) = csa(&["split", "--file", f.to_str().unwrap(), "--algebra", "A5"]);
    assert_eq!((code, r["status"].as_str()), (0, Some("yes")));
    let extra = scratch("a5_witness.json", &serde_json::json!({ "witnesses": [r["witness"]] }).to_string());
    let (code, v) = csa(&["verify", "--file", f.to_str().unwrap(), "--hints", extra.to_str().unwrap()]);
    assert_eq!((code, v["status"].as_str()), (0, Some("yes")));

    // A tampered witness is rejected.
    let mut w = r["witness"].clone();
    w["generators"][1][0][0] = Value::String("7".into());
    let bad = scratch("a5_bad.json", &serde_json::json!({ "witnesses": [w] }).to_string());
    let (code, v) = csa(&["verify", "--file", f.to_str().unwrap(), "--hints", bad.to_str().unwrap()]);
    assert_eq!((code, v["status"].as_str()), (0, Some("no")));
}

#[test]
fn cubic_extension_end_to_end() {
    let f = fixture("cubic_extension.json");
    let args = ["extend", "--file", f.to_str().unwrap(), "--algebra", "D", "--auto", "sigma"];
    let (code, r) = csa(&args);
    assert_eq!((code, r["status"].as_str()), (0, Some("yes")), "{r}");
    let extra = scratch("d_witness.json", &serde_json::json!({ "witnesses": [r["witness"]] }).to_string());
    let (code, v) =
        csa(&["verify", "--file", f.to_str().unwrap(), "--hints", extra.to_str().unwrap(), "--algebra", "D"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("yes")));
    let (_, again) = csa(&args);
    assert_eq!(without_timing(r), without_timing(again));
}

#[test]
fn undecided_without_hints() {
    let mut bundle: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("cubic_extension.json")).unwrap()).unwrap();
    bundle.as_object_mut().unwrap().remove("hints");
    let f = scratch("no_hints.json", &bundle.to_string());
    let (code, r) = csa(&["iso", "--file", f.to_str().unwrap(), "--left", "D", "--right", "D2"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "undecided");
    assert!(r["reason"].as_str().is_some_and(|s| !s.is_empty()));
}

#[test]
fn errors_exit_with_one() {
    let (code, r) = csa(&["split", "--file", "/nonexistent/problem.json", "--algebra", "A"]);
    assert_eq!((code, r["status"].as_str()), (1, Some("error")));
    let nonmonic = scratch("nonmonic.json", r#"{"fields": [{"name": "K", "modulus": ["1", "0", "2"]}]}"#);
    let (code, r) = csa(&["split", "--file", nonmonic.to_str().unwrap(), "--algebra", "A"]);
    assert_eq!(code, 1);
    assert!(r["reason"].as_str().unwrap().contains("not monic"));
    let f = fixture("quaternions.json");
    let (code, r) = csa(&["split", "--file", f.to_str().unwrap(), "--algebra", "missing"]);
    assert_eq!(code, 1);
    assert!(r["reason"].as_str().unwrap().contains("unresolved name: missing"));
    let (code, _) = csa(&["iso", "--file", f.to_str().unwrap(), "--left", "Q8"]);
    assert_eq!(code, 1);
}

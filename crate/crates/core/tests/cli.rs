use std::path::Path;
use std::process::Command;

use serde_json::Value;
use superjordan::cli::{CheckPayload, ClassifyPayload, IsoPayload, SpecialPayload};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_superjordan"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut v = vec!["--json"];
    v.extend_from_slice(args);
    let (code, out, err) = run(&v);
    let text = if out.is_empty() { err } else { out };
    (code, serde_json::from_str(&text).expect("json payload"))
}

fn export(name: &str, dir: &Path) -> String {
    let path = dir.join(format!("{name}.sca"));
    let p = path.to_str().unwrap().to_string();
    let (code, _, _) = run(&["catalog", "export", name, "--out", &p]);
    assert_eq!(code, 0);
    p
}

#[test]
fn check_exported_entry() {
    let dir = tempfile::tempdir().unwrap();
    let p = export("S3_7", dir.path());
    let (code, out, _) = run(&["check", &p]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("super Jordan identity: holds"));
}

#[test]
fn check_one_sided_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.sca");
    std::fs::write(
        &p,
        r#"{"dim_even": 1, "dim_odd": 2, "field": "rational", "complete": false,
  "products": [
    {"left": "e1", "right": "e1", "result": [["1", "e1"]]},
    {"left": "e1", "right": "o1", "result": [["1/2", "o1"]]},
    {"left": "o1", "right": "e1", "result": [["1/2", "o1"]]},
    {"left": "e1", "right": "o2", "result": [["1/2", "o2"]]},
    {"left": "o2", "right": "e1", "result": [["1/2", "o2"]]},
    {"left": "o1", "right": "o2", "result": [["2", "e1"]]},
    {"left": "o2", "right": "o1", "result": [["-1", "e1"]]}
  ]}"#,
    )
    .unwrap();
    let (code, v) = json(&["check", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    let payload: CheckPayload = serde_json::from_value(v).unwrap();
    assert!(!payload.super_jordan);
    assert!(payload.violations.iter().any(|r| r.basis.len() == 4));
}

#[test]
fn check_rescaled_product_still_holds() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("scaled.sca");
    std::fs::write(
        &p,
        r#"{"dim_even": 1, "dim_odd": 2, "field": "rational", "products": [
    {"left": "e1", "right": "e1", "result": [["1", "e1"]]},
    {"left": "e1", "right": "o1", "result": [["1/2", "o1"]]},
    {"left": "e1", "right": "o2", "result": [["1/2", "o2"]]},
    {"left": "o1", "right": "o2", "result": [["2", "e1"]]}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["check", p.to_str().unwrap()]).0, 0);
}

#[test]
fn check_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.sca");
    std::fs::write(&p, "").unwrap();
    let (code, _, err) = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains(":1:1:"), "{err}");
    let q = dir.path().join("broken.sca");
    std::fs::write(&q, "{\"dim_even\": 1,\n\"dim_odd\": ,}").unwrap();
    let (code, _, err) = run(&["check", q.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains(":2:"), "{err}");
    assert_eq!(run(&["check", "/nonexistent/x.sca"]).0, 2);
}

#[test]
fn check_over_finite_field_exhaustive() {
    let (code, v) = json(&["--field", "3", "check", "S3_8", "--exhaustive", "--ungraded"]);
    assert_eq!(code, 1);
    let p: CheckPayload = serde_json::from_value(v).unwrap();
    assert!(p.super_jordan);
    assert_eq!(p.ungraded, Some(false));
    assert_eq!(p.exhaustive, Some(false));
}

#[test]
fn catalog_commands() {
    let (code, out, _) = run(&["catalog", "list", "--dim", "2"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("11 entries\n"), "{out}");
    let (code, out, _) = run(&["catalog", "show", "S3_13"]);
    assert_eq!(code, 0);
    let row = out.lines().find(|l| l.starts_with("e1 |")).unwrap();
    assert!(row.contains("1/2*o1"));
    let row = out.lines().find(|l| l.starts_with("e2 |")).unwrap();
    assert!(row.contains("1/2*o1"));
    assert_eq!(run(&["catalog", "show", "NOPE"]).0, 2);
}

#[test]
fn peirce_commands() {
    let (code, out, _) = run(&["peirce", "K3", "--idempotent", "e1"]);
    assert_eq!(code, 0);
    assert!(out.contains("P1/2: [o1, o2]"), "{out}");
    let (code, out, _) = run(&["peirce", "S3_13", "--idempotent", "e1", "--idempotent", "e2", "--refined"]);
    assert_eq!(code, 0);
    assert!(out.contains("P12: [o1]"), "{out}");
    assert_eq!(run(&["peirce", "K3", "--idempotent", "o1"]).0, 2);
    assert_eq!(run(&["peirce", "K3", "--all"]).0, 2);
    let (code, out, _) = run(&["--field", "5", "peirce", "U1s+U1s", "--all"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("idempotent ").count(), 3, "{out}");
}

#[test]
fn iso_commands() {
    let (code, v) = json(&["--field", "5", "iso", "S3_9", "S3_12"]);
    assert_eq!(code, 1);
    let p: IsoPayload = serde_json::from_value(v).unwrap();
    assert!(p.fingerprint_diff.iter().any(|d| d.starts_with("even ")));
    let (code, out, _) = run(&["--field", "5", "iso", "K3", "S3_7"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn classify_command() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("reps");
    let (code, v) = json(&[
        "classify", "--type", "1,1", "--even", "U1", "--field", "5", "--constraints", "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let p: ClassifyPayload = serde_json::from_value(v).unwrap();
    assert_eq!(p.orbits.len(), 3);
    assert_eq!(p.constraints.unwrap().len(), 1);
    for i in 1..=3 {
        let f = out_dir.join(format!("orbit{i}.sca"));
        assert_eq!(run(&["check", f.to_str().unwrap()]).0, 0);
    }
    assert_eq!(run(&["classify", "--type", "1,1", "--even", "U1"]).0, 2);
    assert_eq!(run(&["classify", "--type", "x", "--even", "U1", "--field", "5"]).0, 2);
}

#[test]
fn special_commands() {
    let (code, out, _) = run(&["special", "--witness", "K3"]);
    assert_eq!(code, 0);
    assert!(out.contains("embedding verified"));
    assert_eq!(run(&["special", "--witness", "UT6"]).0, 0);
    assert_eq!(run(&["special", "--witness", "S8_3"]).0, 0);
    assert_eq!(run(&["special", "--witness", "S1_3-fixed"]).0, 0);
    let (code, v) = json(&["special", "--witness", "S1_3"]);
    assert_eq!(code, 1);
    let p: SpecialPayload = serde_json::from_value(v).unwrap();
    assert_eq!(p.defects.len(), 2);
    let (code, out, _) = run(&["special", "--search", "S3_8", "--system", "oddweyl"]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = run(&["special", "--search", "S3_8", "--system", "oddweylsupercommutator"]);
    assert_eq!(code, 1);
    assert_eq!(run(&["special", "--witness", "NOPE"]).0, 2);
}

#[test]
fn special_with_system_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("w.json");
    std::fs::write(
        &p,
        r#"{"generators": [{"name": "eta", "parity": 0}, {"name": "xi", "parity": 0}],
            "relations": ["xi*eta -> eta*xi + 1"], "matrix": [1, 1]}"#,
    )
    .unwrap();
    let (code, out, _) = run(&["special", "--search", "K3", "--system-file", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn quiet_prints_nothing() {
    let (code, out, err) = run(&["--quiet", "special", "--witness", "S1_3"]);
    assert_eq!(code, 1);
    assert!(out.is_empty() && err.is_empty());
}

#[test]
fn deterministic_output() {
    let a = run(&["--field", "5", "classify", "--type", "2,1", "--even", "B1"]);
    let b = run(&["--field", "5", "classify", "--type", "2,1", "--even", "B1"]);
    assert_eq!(a, b);
}

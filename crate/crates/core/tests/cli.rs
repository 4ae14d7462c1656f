use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use derived_hecke::report::{AuditReport, Report};

fn dhecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dhecke"))
        .args(args)
        .env_remove("DHECKE_OUT")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    let out = dhecke(args);
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("canonical JSON on stdout")
}

#[test]
fn rootdata_exit_codes() {
    assert_eq!(code(&["rootdata", "--preset", "GL3", "--lambda", "1,0,0", "--chi", "1,2,3"]), 0);
    assert_eq!(code(&["rootdata", "--preset", "Sp4", "--lambda", "0,-1"]), 0);
    assert_eq!(code(&["rootdata", "--preset", "XY3"]), 2);
    assert_eq!(code(&["rootdata"]), 2);
}

#[test]
fn hecke_exit_codes() {
    let out = dhecke(&["hecke", "--preset", "GL2", "--lambda", "2,0", "--prime", "3", "--oracle", "--emit-reps"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let reps = doc["checks"][0]["details"]["representatives"].as_array().unwrap();
    assert_eq!(reps.len(), 9);
    assert_eq!(code(&["hecke", "--preset", "GL3", "--lambda", "1,1,0", "--p", "2", "--product-with", "1,0,0"]), 0);
    assert_eq!(code(&["hecke", "--preset", "GL2", "--lambda", "0,1", "--prime", "3"]), 2);
    assert_eq!(code(&["hecke", "--preset", "GL2", "--lambda", "1,0", "--prime", "4"]), 2);
}

#[test]
fn ext_exit_codes() {
    let out = dhecke(&["ext", "--vars", "1", "--field", "Q", "--gens", r#"[["X^2"]]"#]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    let check = &doc["checks"].as_array().unwrap().iter().find(|c| c["name"] == "generation_verdict").unwrap();
    assert_eq!(check["details"]["verdict_text"], "not generated over bottom degree");
    assert_eq!(doc["status"], "fail");

    assert_eq!(code(&["ext", "--vars", "2", "--field", "Fp:5", "--gens", r#"["X1 + X2^2", "X2"]"#, "--l0", "2"]), 0);
    assert_eq!(code(&["ext", "--vars", "2", "--field", "Q", "--gens", r#"["X1 - 1"]"#]), 2);
    assert_eq!(code(&["ext", "--vars", "2", "--field", "Fp:4", "--gens", r#"["X1"]"#]), 2);
}

#[test]
fn dims_exit_codes() {
    assert_eq!(code(&["dims", "--preset", "GL2", "--l0", "1"]), 0);
    assert_eq!(code(&["dims", "--preset", "Sp4", "--l0", "2"]), 0);
    let good = r#"{"locals":[{"place":"p","h0":1,"h1":5,"h2":0,"dim_v":4,"deg_f":1}]}"#;
    assert_eq!(code(&["dims", "--ledger", good]), 0);
    let bad = r#"{"locals":[{"place":"p","h0":1,"h1":6,"h2":0,"dim_v":4,"deg_f":1}]}"#;
    // a local datum violating its Euler identity cannot be constructed
    assert_eq!(code(&["dims", "--ledger", bad]), 2);
    let gw = r#"{"h0_v":0,"h0_vdual1":0,"selmer":0,"dual_selmer":0,"locals":[{"place":"p","h0":0,"t":1,"dim_v":4,"deg_f":1}]}"#;
    assert_eq!(code(&["dims", "--ledger", gw]), 1);
    assert_eq!(code(&["dims", "--ledger", r#"{"l0": 1, "d": 2}"#]), 1);
    assert_eq!(code(&["dims", "--ledger", r#"{"locals": 3}"#]), 2);
    assert_eq!(code(&["dims", "--ledger", "/nonexistent/ledger.json"]), 2);
}

#[test]
fn finite_exit_codes() {
    assert_eq!(code(&["finite", "--n", "2", "--p", "3", "--check", "cosets", "--lambda", "2,0"]), 0);
    assert_eq!(code(&["finite", "--n", "3", "--p", "2", "--check", "reps", "--lambda", "1,1,0"]), 0);
    assert_eq!(code(&["finite", "--n", "2", "--p", "3", "--b", "1", "--c", "2", "--check", "upfact"]), 0);
    assert_eq!(code(&["finite", "--n", "2", "--p", "3", "--b", "2", "--c", "2", "--check", "diamond"]), 0);
    assert_eq!(code(&["finite", "--n", "2", "--p", "3", "--b", "2", "--c", "2", "--check", "diamond", "--planted"]), 1);
    assert_eq!(code(&["finite", "--n", "2", "--p", "2", "--b", "3", "--check", "homs"]), 0);
    assert_eq!(code(&["finite", "--n", "2", "--p", "3", "--check", "product", "--lambda", "1,0", "--lambda2", "2,0"]), 0);
    // central coweights are excluded from the U_p identity
    assert_eq!(code(&["finite", "--n", "2", "--p", "3", "--b", "1", "--c", "2", "--check", "upfact", "--lambda", "1,1"]), 1);
    assert_eq!(code(&["finite", "--n", "4", "--p", "2", "--check", "cosets"]), 2);
    assert_eq!(code(&["finite", "--n", "3", "--p", "3", "--check", "cosets", "--kind", "iwahori", "--N", "2"]), 2);
}

#[test]
fn audit_exit_codes() {
    assert_eq!(code(&["audit", "--preset", "GL2", "--p", "3", "--l0", "1"]), 0);
    assert_eq!(code(&["audit", "--preset", "Sp4", "--p", "3", "--l0", "1"]), 0);
    assert_eq!(code(&["audit", "--config", r#"{"preset": "GL2", "primes": [2], "l0": 2}"#]), 0);
    assert_eq!(code(&["audit", "--config", r#"{"preset": "GL2", "bogus": 1}"#]), 2);
    assert_eq!(code(&["audit", "--config", r#"{"preset": "GL9"}"#]), 2);
    assert_eq!(code(&["audit", "--config", "{not json"]), 2);
    assert_eq!(code(&["audit", "--config", r#"{"preset": "GL2", "datum": {}}"#]), 2);
    assert_eq!(code(&["audit"]), 2);
}

#[test]
fn usage_exit_codes() {
    assert_eq!(code(&["audit", "--preset", "GL2", "--unknown-flag"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn reports_are_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dhecke"))
        .args(["dims", "--preset", "GL3", "--l0", "1"])
        .env("DHECKE_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json = std::fs::read(dir.path().join("dims.json")).unwrap();
    assert_eq!(json, out.stdout);
    let md = std::fs::read_to_string(dir.path().join("dims.md")).unwrap();
    assert!(md.starts_with("# Dimension audit"));
    let timings: Value = serde_json::from_slice(&std::fs::read(dir.path().join("dims.timings.json")).unwrap()).unwrap();
    assert!(timings.is_object() || timings.is_array());
    assert!(!String::from_utf8_lossy(&json).contains("elapsed"));
}

#[test]
fn unwritable_out_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    assert_eq!(code(&["rootdata", "--preset", "GL2", "--out", target.to_str().unwrap()]), 2);
}

#[test]
fn datum_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dhecke(&["rootdata", "--preset", "GL2"]);
    let doc = stdout_json(&out);
    let datum = &doc["checks"][0]["details"]["datum"];
    let path = dir.path().join("gl2.json");
    std::fs::write(&path, datum.to_string()).unwrap();
    assert!(Path::new(&path).is_file());
    assert_eq!(code(&["hecke", "--datum", path.to_str().unwrap(), "--lambda", "1,0", "--prime", "5"]), 0);
}

#[test]
fn empty_and_failing_audits() {
    let empty = AuditReport::new();
    let doc: Value = serde_json::from_str(&empty.canonical_json()).unwrap();
    assert_eq!(doc, serde_json::json!({ "checks": [], "status": "pass" }));
    assert!(empty.canonical_json().ends_with('\n'));

    let mut one = AuditReport::new();
    one.push(&serde_json::json!({}), Report::with_verdict("x", false), 0.0);
    assert_eq!(one.status(), "fail");
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["audit", "--preset", "GL3", "--p", "2", "--l0", "2", "--seed", "5"];
    let a = dhecke(&args);
    let b = dhecke(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = dhecke(&["audit", "--preset", "GL3", "--p", "2", "--l0", "2", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout, "the seed should reach the sampled checks");
}

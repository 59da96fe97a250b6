//! End-to-end checks of the binary: JSON shapes, CSV output, exit codes.

use std::process::Command;

fn xitheta() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xitheta"))
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = xitheta().args(args).output().expect("spawn xitheta");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn psi_prints_value_and_error() {
    let v = stdout_json(&["psi", "--y", "1", "--tol", "1e-12"]);
    let value = v["value"].as_f64().unwrap();
    assert!((value - 0.043217405606654).abs() < 1e-12);
    assert!(v["err"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn xi_prints_complex_value_and_modulus() {
    let v = stdout_json(&["xi", "--sigma", "0.5", "--t", "0"]);
    assert!((v["re"].as_f64().unwrap() - 0.4971207781883141).abs() < 1e-9);
    assert!((v["F"].as_f64().unwrap() - 0.98851627242622).abs() < 1e-9);
}

#[test]
fn coeffs_and_poly_verdicts() {
    let v = stdout_json(&["coeffs", "--tau", "0.3", "--n", "1"]);
    assert!((v["a"][0].as_f64().unwrap() - 0.02751782479725908).abs() < 1e-9);
    assert!(v["trail_even"].as_f64().unwrap() > 0.0);

    let v = stdout_json(&["poly", "count", "--tau", "0.3", "--n", "1"]);
    assert_eq!(v["sturm"]["n_real"].as_i64().unwrap(), 0);
    assert_eq!(v["agree"].as_bool().unwrap(), true);

    let v = stdout_json(&["poly", "disc", "--tau", "0.3", "--n", "1"]);
    let d = v["discr"].as_f64().unwrap();
    let dc = v["discr_closed"].as_f64().unwrap();
    assert!(d >= 0.0 && (d - dc).abs() <= 1e-9 * (1.0 + d.abs()));

    let v = stdout_json(&["poly", "min", "--tau", "0.3", "--n", "1"]);
    assert!(v["value"].as_f64().unwrap() > 0.0);
    assert!(v["margin"].as_f64().unwrap() > 0.0);

    let v = stdout_json(&["poly", "selftest"]);
    assert_eq!(v["disagreements"].as_i64().unwrap(), 0);
}

#[test]
fn scan_emits_csv_and_jsonl() {
    let out = xitheta()
        .args(["scan", "--tau-min", "0.2", "--tau-max", "0.3", "--steps", "2", "--n-list", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("tau,n,a0"));
    assert_eq!(lines.count(), 2);

    let out = xitheta()
        .args([
            "scan", "--tau-min", "0.2", "--tau-max", "0.2", "--steps", "1", "--n-list", "1",
            "--format", "jsonl",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let row: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().lines().next().unwrap())
            .unwrap();
    assert_eq!(row["positivity"].as_str().unwrap(), "positive");
}

#[test]
fn verify_thm1_single_point() {
    let out = xitheta()
        .args(["verify", "thm1", "--tau-list", "0.3", "--t-list", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let row: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().lines().next().unwrap())
            .unwrap();
    assert_eq!(row["pass"].as_bool().unwrap(), true);
}

#[test]
fn exit_codes() {
    // usage error -> 1
    let out = xitheta().args(["psi"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = xitheta().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // domain error -> 1
    let out = xitheta().args(["psi", "--y", "-3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // help -> 0
    let out = xitheta().args(["--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let out = xitheta()
        .args(["psi", "--y", "2", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["value"].as_f64().unwrap() > 0.0);
}

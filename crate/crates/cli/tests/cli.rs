//! End-to-end tests of the `bilinext` binary: exit codes, determinism,
//! report shape, and the failure-replay contract.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bilinext"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process should exit normally")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout should be JSON")
}

/// Drops the timing lines from a pretty-printed report so runs can be
/// compared byte-for-byte.
fn strip_timing(report: &str) -> String {
    report
        .lines()
        .filter(|line| !line.contains("_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn suite_reports_are_deterministic_apart_from_timing() {
    let a = run(&["suite", "--id", "thm52", "--trials", "25", "--seed", "9"]);
    let b = run(&["suite", "--id", "thm52", "--trials", "25", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    let (a, b) = (
        String::from_utf8(a.stdout).unwrap(),
        String::from_utf8(b.stdout).unwrap(),
    );
    assert_eq!(strip_timing(&a), strip_timing(&b));

    let c = run(&["suite", "--id", "thm52", "--trials", "25", "--seed", "10"]);
    let c = String::from_utf8(c.stdout).unwrap();
    assert_ne!(
        strip_timing(&a),
        strip_timing(&c),
        "different seeds should draw different instances"
    );
}

#[test]
fn counterexample_suite_reports_the_fixture_norms() {
    let out = run(&["suite", "--id", "counterexample"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    let details = &report["details"];
    let e_norm = details["e_norm"].as_f64().unwrap();
    assert!((e_norm - 2f64.sqrt()).abs() <= 1e-12);
    assert!((details["phi_norm"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!((details["phi_hat_norm"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(code(&run(&["suite", "--id", "not-a-suite"])), 2);
    assert_eq!(code(&run(&["suite", "--id", "thm52", "--trials", "0"])), 2);
    assert_eq!(code(&run(&["suite", "--id", "thm52", "--dims", "9"])), 2);
    assert_eq!(code(&run(&["suite", "--id", "thm52", "--tol", "bogus=1"])), 2);
    assert_eq!(code(&run(&["suite", "--id", "cor53", "--p", "1"])), 2);
    // An unattainable tolerance turns healthy trials into failures: exit 1.
    let strict = run(&[
        "suite",
        "--id",
        "cor53",
        "--trials",
        "3",
        "--tol",
        "equality=1e-300",
    ]);
    assert_eq!(code(&strict), 1);
    let report = stdout_json(&strict);
    assert_eq!(report["pass"], false);
    assert!(!report["failures"].as_array().unwrap().is_empty());
}

#[test]
fn compute_op_norm_reports_the_oblique_projection_norm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.json");
    std::fs::write(
        &path,
        r#"{"domain": {"dim": 2, "p": 2.0}, "codomain": {"dim": 2, "p": 2.0},
            "matrix": [[0.0, 0.0], [1.0, 1.0]]}"#,
    )
    .unwrap();
    let out = run(&["compute", "op-norm", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let value = stdout_json(&out)["op_norm"].as_f64().unwrap();
    assert!((value - 2f64.sqrt()).abs() <= 1e-10);
}

#[test]
fn compute_tensor_norm_collapses_single_tensors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("single.json");
    std::fs::write(
        &path,
        r#"{"X": {"dim": 2, "p": 2.0}, "Y": {"dim": 2, "p": 2.0},
            "terms": [{"x": [3.0, 4.0], "y": [5.0, 12.0]}]}"#,
    )
    .unwrap();
    let out = run(&["compute", "tensor-norm", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = &stdout_json(&out)["report"];
    for key in ["injective", "projective_upper", "projective_dual_lower"] {
        let v = report[key].as_f64().unwrap();
        assert!((v - 65.0).abs() <= 1e-9, "{key} = {v}");
    }
    assert_eq!(report["certified"], true);

    let csv = run(&["compute", "tensor-norm", path.to_str().unwrap(), "--csv"]);
    let row = String::from_utf8(csv.stdout).unwrap();
    assert!(row.starts_with("tensor-norm,"));
    assert_eq!(row.trim_end().split(',').count(), 7);
}

#[test]
fn compute_rejects_malformed_and_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"bad\":").unwrap();
    assert_eq!(code(&run(&["compute", "op-norm", path.to_str().unwrap()])), 2);

    let missing = dir.path().join("missing.json");
    let out = run(&["compute", "op-norm", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let message = String::from_utf8(out.stderr).unwrap();
    assert!(
        message.contains("missing.json"),
        "IO errors should name the path: {message}"
    );
}

#[test]
fn failure_entries_replay_exactly_through_compute() {
    // Force failures with an unattainable tolerance, then replay the first
    // recorded instance with its recorded seed; the norms must reproduce the
    // recorded gap exactly.
    let out = run(&[
        "suite",
        "--id",
        "cor53",
        "--trials",
        "4",
        "--seed",
        "3",
        "--tol",
        "equality=1e-300",
    ]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    let failure = report["failures"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["invariant"] == "equality")
        .expect("the strict tolerance should produce an equality failure");
    let recorded_gap = failure["gap"].as_f64().unwrap();
    let seed = failure["seed"].as_u64().unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("instance.json");
    std::fs::write(&path, failure["instance"].to_string()).unwrap();
    let replay = run(&[
        "compute",
        "extend",
        path.to_str().unwrap(),
        "--seed",
        &seed.to_string(),
    ]);
    assert_eq!(code(&replay), 0);
    let result = stdout_json(&replay);
    let phi = result["phi_norm"].as_f64().unwrap();
    let phi_hat = result["phi_hat_norm"].as_f64().unwrap();
    assert_eq!(
        (phi_hat - phi).abs(),
        recorded_gap,
        "replay must reproduce the recorded gap bit-for-bit"
    );
}

#[test]
fn suite_csv_emits_one_flat_row() {
    let out = run(&["suite", "--id", "counterexample", "--csv"]);
    assert_eq!(code(&out), 0);
    let row = String::from_utf8(out.stdout).unwrap();
    assert_eq!(row.lines().count(), 1);
    let fields: Vec<&str> = row.trim_end().split(',').collect();
    assert_eq!(fields[0], "suite");
    assert_eq!(fields[1], "counterexample");
    assert_eq!(fields[4], "true");
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "suite",
        "--id",
        "counterexample",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "--out should leave stdout empty");
    assert!(Path::new(&path).exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["suite_id"], "counterexample");
}

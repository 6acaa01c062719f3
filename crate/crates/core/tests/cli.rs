//! End-to-end tests of the varprod binary: exit codes, output formats,
//! and rerun determinism.

use std::process::{Command, Output};

fn varprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const PAULI: &str = r#"{"kind":"pauli"}"#;
const WORKED_STATE: &str =
    r#"{"kind":"bloch_qubit","r":[0.3333333333333333,0.6666666666666666,0]}"#;

#[test]
fn bound_csv_on_stdout() {
    let out = varprod(&[
        "bound",
        "--state",
        WORKED_STATE,
        "--obs",
        PAULI,
        "--bound",
        "theorem1",
        "--bound",
        "theorem2_det",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "name,product,bound,gap,tight");
    assert_eq!(lines.len(), 3);
    let theorem1: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    let det: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!((theorem1 - 8.0 / 27.0).abs() < 1e-12);
    assert!((theorem1 - det).abs() < 1e-11);
}

#[test]
fn bound_json_file_reruns_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_str = path.to_str().unwrap();
    let args = [
        "bound",
        "--state",
        r#"{"kind":"bloch_qutrit_param","a":0.5,"alpha":0.7,"beta":0.2}"#,
        "--obs",
        r#"{"kind":"gellmann"}"#,
        "--bound",
        "theorem2_det",
        "--bound",
        "theorem2_cycles",
        "--bound",
        "sum_amgm",
        "--format",
        "json",
        "--out",
        path_str,
    ];
    assert_eq!(varprod(&args).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(varprod(&args).status.code(), Some(0));
    let second = std::fs::read(&path).unwrap();
    assert_eq!(first, second);
    let parsed: Vec<serde_json::Value> = serde_json::from_slice(&first).unwrap();
    assert_eq!(parsed.len(), 3);
    assert_eq!(parsed[1]["name"], "theorem2_cycles");
}

#[test]
fn state_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    std::fs::write(&path, WORKED_STATE).unwrap();
    let out = varprod(&[
        "bound",
        "--state",
        path.to_str().unwrap(),
        "--obs",
        PAULI,
        "--bound",
        "pauli_closed_form",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let bound: f64 = stdout(&out)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((bound - 8.0 / 27.0).abs() < 1e-14);
}

#[test]
fn parse_failures_exit_1() {
    // malformed inline JSON
    let out = varprod(&[
        "bound",
        "--state",
        r#"{"kind":"bloch_qubit""#,
        "--obs",
        PAULI,
        "--bound",
        "theorem1",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // missing file
    let out = varprod(&[
        "bound",
        "--state",
        "/nonexistent/state.json",
        "--obs",
        PAULI,
        "--bound",
        "theorem1",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // unknown bound name (argument-level parse failure)
    let out = varprod(&[
        "bound",
        "--state",
        WORKED_STATE,
        "--obs",
        PAULI,
        "--bound",
        "not_a_bound",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validation_failures_exit_2() {
    // state outside the Bloch ball
    let out = varprod(&[
        "bound",
        "--state",
        r#"{"kind":"bloch_qubit","r":[0,0,1.5]}"#,
        "--obs",
        PAULI,
        "--bound",
        "theorem1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // observable dimension does not match the state
    let out = varprod(&[
        "bound",
        "--state",
        WORKED_STATE,
        "--obs",
        r#"{"kind":"gellmann"}"#,
        "--bound",
        "theorem2_det",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // pair bound needs exactly two observables
    let out = varprod(&[
        "bound",
        "--state",
        WORKED_STATE,
        "--obs",
        PAULI,
        "--bound",
        "schrodinger_pair",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_command_reports_and_exits() {
    let out = varprod(&[
        "validate",
        "--state",
        r#"{"kind":"bloch_qubit","r":[0,0,1.5]}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["valid"], false);
    assert!((report["bloch_norm"].as_f64().unwrap() - 1.5).abs() < 1e-15);
    assert!(report["violation"].as_str().unwrap().contains("positivity"));

    let out = varprod(&[
        "validate",
        "--state",
        r#"{"kind":"bloch_qutrit","r":[0,0,0,0,0,0,0,0]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["valid"], true);
    assert_eq!(report["dim"], 3);

    // norm passes but the eigenvalue check rejects: conditions disagree
    let out = varprod(&[
        "validate",
        "--state",
        r#"{"kind":"bloch_qutrit_param","a":1.0,"alpha":1.5707963267948966,"beta":0.7853981633974483}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["norm_within_ball"], true);
    assert_eq!(report["norm_and_eigen_agree"], false);
}

#[test]
fn sweep_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let out = varprod(&[
        "sweep",
        "--figure",
        "fig1",
        "--steps",
        "12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "theta,product,L7,L10,L11");
    assert_eq!(lines.len(), 14);

    // rerunning the same configuration is byte-identical
    let rerun = varprod(&["sweep", "--figure", "fig1", "--steps", "12"]);
    assert_eq!(stdout(&rerun), csv);
}

#[test]
fn compare_command() {
    let out = varprod(&["compare", "--state", WORKED_STATE]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.contains("pauli_triple_tight"));
}

#[test]
fn fuzz_exit_codes_and_determinism() {
    let args = [
        "fuzz", "--trials", "200", "--dims", "2,3", "--n-obs", "3", "--seed", "11",
    ];
    let first = varprod(&args);
    assert_eq!(first.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(summary["pass"], true);
    assert_eq!(summary["trials"], 200);
    let second = varprod(&args);
    assert_eq!(first.stdout, second.stdout);

    // a tolerance below rounding noise counts rounding as violations and
    // exercises the verification-failure exit code
    let out = varprod(&[
        "fuzz", "--trials", "200", "--dims", "2", "--n-obs", "3", "--seed", "11", "--tol", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["pass"], false);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(varprod(&["--help"]).status.code(), Some(0));
    assert_eq!(varprod(&["--version"]).status.code(), Some(0));
    assert_eq!(varprod(&["bound", "--help"]).status.code(), Some(0));
}

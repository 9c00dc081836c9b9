use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn qgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn pennyflip_reports_certain_win() {
    let out = qgame(&["pennyflip", "--p", "0.37", "--tol", "1e-12"]);
    assert!(out.status.success());
    let r = report(&out);
    assert!((r["results"]["quantum_bob_wins"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(r["results"]["classical_bob_wins"], 0.5);
    assert!(!qgame(&["pennyflip", "--p", "2"]).status.success());
}

#[test]
fn classical_fixtures() {
    let pd = report(&qgame(&["classical", fixture("pd.json").to_str().unwrap()]));
    assert_eq!(pd["results"]["pure_nash"], serde_json::json!([[1, 1]]));
    assert_eq!(pd["results"]["pareto_optimal"], serde_json::json!([[0, 0]]));

    let bos = report(&qgame(&["classical", fixture("bos.json").to_str().unwrap()]));
    let eq = bos["results"]["equilibria"].as_array().unwrap();
    assert_eq!(eq.len(), 3);
    assert!(eq[2]["pure"].is_null());

    let zero = report(&qgame(&["classical", fixture("zero.json").to_str().unwrap()]));
    assert_eq!(zero["results"]["saturated"], true);
}

#[test]
fn malformed_game_file_is_rejected_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"name\": \"bad\",\n  \"A\": [[1, 2], [3, \"x\"]]\n}\n").unwrap();
    let out = qgame(&["classical", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");
}

#[test]
fn qgame_payoff_and_nash() {
    let pd = fixture("pd.json");
    let r = report(&qgame(&["qgame", pd.to_str().unwrap(), "payoff"]));
    assert_eq!(r["results"]["payoffs"], serde_json::json!([3.0, 3.0]));
    assert!(r["residuals"]["s_symmetry: relation"]["pass"].as_bool().unwrap());

    let out = qgame(&["qgame", pd.to_str().unwrap(), "nash", "--grid", "32"]);
    assert!(out.status.success());
    let eq = &report(&out)["results"]["equilibria"];
    assert_eq!(eq["profiles"].as_array().unwrap().len(), 1);
    assert_eq!(eq["payoffs"], serde_json::json!([[1.0, 1.0]]));

    let out = qgame(&["qgame", pd.to_str().unwrap(), "--gamma1", "7", "payoff"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bos_sweep_csv_keeps_twist_symmetry() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = qgame(&[
        "qgame",
        fixture("bos.json").to_str().unwrap(),
        "sweep",
        "--grid-gamma",
        "16",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(qgame_core::quantum_game::SWEEP_CSV_HEADER));
    let mut rows = 0;
    for line in lines {
        let t: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(t <= 1e-10, "{line}");
        rows += 1;
    }
    assert_eq!(rows, report(&out)["results"]["rows"].as_u64().unwrap());
}

#[test]
fn braid_verify_and_strict_mode() {
    let out = qgame(&["braid", "verify"]);
    assert!(out.status.success());
    let r = report(&out);
    let ids: Vec<&str> = r["corrections"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"bell-r-last-row") && ids.contains(&"bgr-entry-2-3"));

    let strict = qgame(&["braid", "verify", "--strict-paper"]);
    assert_eq!(strict.status.code(), Some(1));
    let err = String::from_utf8_lossy(&strict.stderr);
    assert!(err.contains("FAIL bell R: unitarity"), "{err}");
    assert!(report(&strict)["corrections"].as_array().unwrap().is_empty());
}

#[test]
fn ssqm_spectrum() {
    let out = qgame(&["ssqm", "spectrum", "--potential", "linear", "--n", "2000", "--levels", "6"]);
    assert!(out.status.success());
    let r = report(&out);
    assert!(r["results"]["sqrt_not"]["pass"].as_bool().unwrap());
    assert_eq!(r["results"]["spectrum"]["paired"].as_array().unwrap().len(), 5);

    let zero = report(&qgame(&["ssqm", "spectrum", "--potential", "zero", "--xmin", "0", "--xmax", "1", "--n", "64"]));
    assert_eq!(zero["results"]["spectrum"]["eigs_h0"], zero["results"]["spectrum"]["eigs_h1"]);

    assert_eq!(qgame(&["ssqm", "spectrum", "--n", "8"]).status.code(), Some(2));
    assert_eq!(qgame(&["ssqm", "spectrum", "--potential", "cosh"]).status.code(), Some(2));
}

#[test]
fn entangle_states() {
    let h = std::f64::consts::FRAC_1_SQRT_2.to_string();
    let bell = report(&qgame(&["entangle", &h, "0", "0", "0", "0", "0", &h, "0"]));
    assert_eq!(bell["results"]["concurrence"], 1.0);
    assert_eq!(bell["results"]["product"], false);

    let z = report(&qgame(&["entangle", "0.5", "0", "0.5", "0", "0.5", "0", "0.5", "0"]));
    assert!(z["results"]["factorization"]["Product"].is_object());

    let basis = report(&qgame(&["entangle", "0", "0", "1", "0", "0", "0", "0", "0"]));
    assert_eq!(basis["results"]["product"], true);

    assert_eq!(qgame(&["entangle", "0", "0", "0", "0", "0", "0", "0", "0"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let pd = fixture("pd.json");
    let args = ["qgame", pd.to_str().unwrap(), "--gamma2", "1.3", "nash", "--seed", "9"];
    let first = qgame(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out_path.to_str().unwrap()]);
    let written = qgame(&with_out);
    assert!(written.stdout.is_empty());
    assert_eq!(first, std::fs::read(&out_path).unwrap());
    assert_eq!(first, qgame(&args).stdout);
}

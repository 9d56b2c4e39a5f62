use std::process::Command;

use narx_select::data::save_csv;
use narx_select::report::Report;
use narx_select::synthetic::NarxSystem;

fn narxid() -> Command {
    Command::new(env!("CARGO_BIN_EXE_narxid"))
}

#[test]
fn dictionary_lists_candidates() {
    let out = narxid().args(["dictionary", "--ny", "2", "--nu", "2", "--ell", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("noV = 35\nsearch space = 2^35 = 34359738368\n"));
    assert_eq!(text.lines().count(), 2 + 35);
}

#[test]
fn identify_simulate_and_baseline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    save_csv(&csv, &NarxSystem::reference().generate(400, 2)).unwrap();
    let out = dir.path().join("run");

    let status = narxid()
        .args(["identify", "--data", csv.to_str().unwrap(), "--iters", "12", "--seed", "3", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let report = Report::load(out.join("report.toml")).unwrap();
    assert_eq!(report.convergence.len(), 12);
    let curve = std::fs::read_to_string(out.join("convergence.csv")).unwrap();
    assert_eq!(curve.lines().count(), 13);

    let sim = narxid()
        .args(["simulate", "--report", out.join("report.toml").to_str().unwrap(), "--data", csv.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(sim.status.success());
    let text = String::from_utf8(sim.stdout).unwrap();
    let reported: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("mse_validation = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((reported - report.mse_validation).abs() <= 1e-10);

    let baseline = narxid().args(["baseline", "--data", csv.to_str().unwrap(), "--n-terms", "4"]).output().unwrap();
    assert!(baseline.status.success());
    let report = Report::from_toml_str(&String::from_utf8(baseline.stdout).unwrap()).unwrap();
    assert_eq!(report.terms.len(), 4);
}

#[test]
fn bad_input_fails_cleanly() {
    let out = narxid().args(["identify", "--data", "/definitely/missing.csv"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
}

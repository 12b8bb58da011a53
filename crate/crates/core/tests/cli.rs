use std::fs;
use std::process::Command;

fn fingerpad() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fingerpad"))
}

#[test]
fn pull_test_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = fingerpad()
        .args(["pull-test", "--case", "IL", "--target", "ptfe", "--pressure", "30", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(csv.lines().count() > 100);
    assert!(dir.path().join("trace.svg").exists());
}

#[test]
fn sweep_and_detect_write_csvs() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [["sweep", "--target", "plywood"], ["detect", "--pressure", "30"]] {
        let out = fingerpad().args(cmd).arg("--out").arg(dir.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(dir.path().join("sweep.csv").exists());
    assert!(dir.path().join("detect.csv").exists());
}

#[test]
fn report_writes_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let out = fingerpad().arg("report").arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let compare = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    assert_eq!(compare.lines().next(), Some("target,case,fa_sim,fa_paper,dev"));
    assert_eq!(compare.lines().count(), 11);
}

#[test]
fn calibrate_with_small_budget() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fast.toml");
    fs::write(&cfg, "[calibration]\nmax_evals = 30\nrestarts = 0\n").unwrap();
    let out = fingerpad()
        .args(["calibrate", "--seed", "3", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("calibrated.toml")).unwrap();
    fingerpad::harness::Config::from_toml_str(&text).unwrap();
    assert!(fs::read_to_string(dir.path().join("calib.csv")).unwrap().starts_with("param,value,lo,hi"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[gripper]\nclosing_sped = 1.0\n").unwrap();
    let out = fingerpad().arg("detect").arg("--config").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = fingerpad().args(["pull-test", "--case", "XX"]).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let missing =
        fingerpad().args(["sweep", "--config", "/nonexistent/cfg.toml"]).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn model_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("soft.toml");
    // A membrane this soft bulges past its own span at 40 kPa.
    fs::write(&cfg, "[membrane]\ne_mpa = 0.01\n").unwrap();
    let out = fingerpad()
        .args(["pull-test", "--case", "IL", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavepacket")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn summary_delta_max(text: &str) -> f64 {
    let tail = text.split("delta_max = ").nth(1).expect("summary line");
    tail.split(',').next().unwrap().trim().parse().unwrap()
}

#[test]
fn profile_summary_sign_follows_charge() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let repel = run(&["profile-delta", "--eta", "10", "--theta", "0.03", "--out", path.to_str().unwrap()]);
    assert_eq!(repel.status.code(), Some(0), "{}", stderr(&repel));
    let csv = fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("delta,probability\n"));
    assert_eq!(csv.lines().count(), 162);

    let attract = run(&["profile-delta", "--eta", "-10", "--theta", "0.03"]);
    assert_eq!(attract.status.code(), Some(0));
    let a = summary_delta_max(&stderr(&attract));
    let r = summary_delta_max(&stdout(&repel));
    assert!(r > 0.0 && (a + r).abs() < 1e-3, "{a} vs {r}");
}

#[test]
fn weak_field_profile_peaks_near_zero() {
    let out = run(&["profile-delta", "--eta", "0.1", "--theta", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(summary_delta_max(&stderr(&out)).abs() < 0.05);
}

#[test]
fn angular_json_envelope() {
    let out = run(&["angular", "--eta", "10", "--delta", "0.4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let columns: Vec<&str> = doc["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(columns, ["theta", "delta", "probability", "rutherford_probability", "dcs", "rutherford_dcs", "ratio"]);
    assert_eq!(doc["meta"]["model"], "coulomb-exact");
    assert!(!doc["rows"].as_array().unwrap().is_empty());
}

#[test]
fn conservation_passes_for_moderate_field() {
    let out = run(&["conservation", "--eta", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out) + &stderr(&out);
    assert!(text.contains("weight sum"));
    assert!(text.contains("sphere integral"));
}

#[test]
fn optical_rejects_empty_range() {
    let out = run(&["optical", "--eta-min", "5", "--eta-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn square_well_optical_check() {
    let out = run(&["optical", "--model", "square-well", "--energy-mev", "5.2233", "--well-depth-mev", "2", "--well-radius-fm", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn energy_scan_skips_out_of_bound_energies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.csv");
    let out = run(&["energy-scan", "--energies-kev", "1,3.8,200", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("skipping E = 1 keV"));
    let csv = fs::read_to_string(&path).unwrap();
    let rho: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(rho.len(), 2);
    assert!(rho[0] > 1.25e-7 && rho[0] < 5e-7, "{}", rho[0]);
    assert!(rho[1] > rho[0]);
}

#[test]
fn conflicting_or_invalid_inputs_exit_with_config_code() {
    assert_eq!(run(&["profile-delta", "--eta", "10", "--energy-kev", "3.8", "--theta", "0"]).status.code(), Some(2));
    assert_eq!(run(&["profile-delta", "--eta", "900", "--theta", "0"]).status.code(), Some(2));
    assert_eq!(run(&["profile-delta", "--eta", "10", "--theta", "0", "--eps", "0.5"]).status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# repulsive case\neta = 10\ntheta = 0.03\n").unwrap();
    let from_file = run(&["--config", cfg.to_str().unwrap(), "profile-delta"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert!(summary_delta_max(&stderr(&from_file)) > 0.0);

    let overridden = run(&["--config", cfg.to_str().unwrap(), "profile-delta", "--eta", "-10"]);
    assert_eq!(overridden.status.code(), Some(0));
    assert!(summary_delta_max(&stderr(&overridden)) < 0.0);
}

#[test]
fn table_dump_columns() {
    let out = run(&["table-dump", "--eta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("l,weight,cos2sigma,sin2sigma,xi\n"));
}

#[test]
fn corrupted_constant_is_detected() {
    let out = run(&["selftest", "--corrupt-constant"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out) + &stderr(&out);
    assert!(text.lines().any(|l| l.contains("[FAIL]") && l.contains("7")), "{text}");
}

use std::path::Path;
use std::process::{Command, Output};

fn uavbs(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.cfg");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_uavbs"))
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn bad_config_exits_1_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let out = uavbs(dir.path(), "radio.bandwidth_hz = -5\n", &["place"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radio.bandwidth_hz"));

    let out = uavbs(dir.path(), "radio.no_such_key = 1\n", &["place"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radio.no_such_key"));
}

#[test]
fn malformed_trajectory_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "t_s,x_m,y_m\n0,0,0\n1,1,oops\n").unwrap();
    let bad = bad.to_string_lossy().into_owned();
    let out = uavbs(dir.path(), "", &["forecast", "--train", &bad, "--test", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn infeasible_run_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // Valid input, but no altitude has any coverage at this threshold.
    let out = uavbs(dir.path(), "radio.pl_threshold_db = 40\n", &["place"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_uavbs"))
        .args(["--config", "/nonexistent/run.cfg", "--out"])
        .arg(dir.path())
        .arg("altitude-profile")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn altitude_profile_artefacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = uavbs(dir.path(), "", &["altitude-profile"]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("out/altitude_profile.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("h_m,radius_m"));
    assert_eq!(csv.lines().count(), 65);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/altitude_profile.json")).unwrap()).unwrap();
    assert!(json["optimal_altitude_m"].as_f64().unwrap() > 10.0);
    assert_eq!(json["config"]["radio"]["backhaul_cap_bps"], serde_json::json!(950e6));
}

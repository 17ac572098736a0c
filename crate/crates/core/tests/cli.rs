use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const BLOCH: &str = r#"{"variant":"bloch","alpha":0.5}"#;

fn multspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multspec")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn spectrum_of_z_is_the_unit_disk() {
    let out = multspec(&["spectrum", "-u", "z"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["kind"], "spectrum");
    assert!((v["result"]["radius"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let curve = v["result"]["curves"][0].as_array().unwrap();
    assert!(curve.len() >= 4096);
    for p in curve {
        let (re, im) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
        assert!((re.hypot(im) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn fredholm_index_of_z_squared() {
    let out = multspec(&["fredholm", "-u", "z^2", "--lambda", "0", "--space", BLOCH]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["fredholm"], true);
    assert_eq!(v["result"]["index"], -2);
    assert_eq!(v["result"]["kernel_dimension"], 0);
}

#[test]
fn verify_chu_passes() {
    let out = multspec(&["verify", "--suite", "chu"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert_eq!(table.lines().filter(|l| l.ends_with("PASS")).count(), 3);
}

#[test]
fn exit_code_contract() {
    assert_eq!(multspec(&["spectrum", "-u", "z+*2"]).status.code(), Some(2));
    assert_eq!(multspec(&["spectrum", "-u", "1/(z-0.5)"]).status.code(), Some(2));
    assert_eq!(multspec(&["norm", "-u", "z", "--space", r#"{"variant":"bloch","alpha":-1}"#]).status.code(), Some(2));
    assert_eq!(multspec(&["nonsense"]).status.code(), Some(2));
    assert_eq!(multspec(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    let out = multspec(&["ess-spectrum", "-u", "z", "--space", r#"{"variant":"hardy_sobolev","beta":0.25}"#]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("outside theorem hypotheses"));
    let out = multspec(&["peak-scan", "-u", "z", "--xi", "1", "--space", r#"{"variant":"growth","alpha":0.5}"#, "--kmax", "64"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let args = ["ess-spectrum", "-u", "(z-0.5)*(z+0.25i)", "--space", BLOCH];
    let (a, b) = (multspec(&args), multspec(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let verify = ["verify", "--suite", "quotient", "--format", "json"];
    assert_eq!(multspec(&verify).stdout, multspec(&verify).stdout);
}

#[test]
fn numbers_carry_seventeen_significant_digits() {
    let out = multspec(&["multiplier", "-u", "z", "--space", BLOCH]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"sup_norm\":1.0000000000000000e0"), "{text}");
    assert_eq!(json(&multspec(&["multiplier", "-u", "z", "--space", BLOCH]))["result"]["verdict"], "yes");
}

#[test]
fn config_file_matches_flags() {
    let path = scratch("fredholm.json");
    std::fs::write(
        &path,
        r#"{"schema_version":1,"command":"fredholm","symbol":"z^2","lambda":"0","space":{"variant":"bloch","alpha":0.5}}"#,
    )
    .unwrap();
    let from_file = multspec(&["--config", path.to_str().unwrap()]);
    let from_flags = multspec(&["fredholm", "-u", "z^2", "--lambda", "0", "--space", BLOCH]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_flags.stdout);

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"schema_version":1,"command":"spectrum","symbol":"z","extra":true}"#).unwrap();
    assert_eq!(multspec(&["--config", bad.to_str().unwrap()]).status.code(), Some(2));
    let old = scratch("old.json");
    std::fs::write(&old, r#"{"schema_version":7,"command":"spectrum","symbol":"z"}"#).unwrap();
    assert_eq!(multspec(&["--config", old.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn svg_and_csv_artifacts() {
    let path = scratch("disk.svg");
    let out = multspec(&["spectrum", "-u", "z^2", "--svg", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("viewBox=\"0 0 800 800\""));
    let out = multspec(&["peak-scan", "-u", "(1+z)/2", "--xi", "-1", "--space", BLOCH, "--kmax", "256"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,value");
    assert_eq!(lines.len(), 1 + 6);
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let capped = Command::new(env!("CARGO_BIN_EXE_multspec")).env("MULTSPEC_THREADS", "1").args(["spectrum", "-u", "z"]).output().unwrap();
    assert_eq!(capped.status.code(), Some(0));
    assert_eq!(capped.stdout, multspec(&["spectrum", "-u", "z"]).stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_multspec")).env("MULTSPEC_THREADS", "zero").args(["spectrum", "-u", "z"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn several_variables_through_the_space_dimension() {
    let out = multspec(&["ess-spectrum", "-u", "z1*z2", "--space", r#"{"variant":"bloch","alpha":0.5,"n":2}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["membership_mode"], "grid_occupancy");
    // |z1 z2| ≤ 1/2 on the ball
    assert!((v["result"]["radius"].as_f64().unwrap() - 0.5).abs() < 1e-6);
}

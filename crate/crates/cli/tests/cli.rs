use std::process::{Command, Output};

use serde_json::Value;

fn hodgewitt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodgewitt"))
        .args(args)
        .env_remove("HODGEWITT_P")
        .env_remove("HODGEWITT_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn beta_of_a_fourth_power() {
    let o = hodgewitt(&["beta", "--input", "t^4", "--p", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "W(p=2,n=2)[t^4; 0]");
}

#[test]
fn beta_rejects_non_closed_input() {
    let o = hodgewitt(&["beta", "--input", "t^2", "--p", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trace_of_dlog() {
    let o = hodgewitt(&["trace", "--cover", "t = t'^2", "--form", "dlog(t')"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "dlog(t)");
}

#[test]
fn malformed_form_is_a_usage_error() {
    let o = hodgewitt(&["trace", "--cover", "t = t'^2", "--form", "dlog(t'"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(hodgewitt(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(hodgewitt(&["verify", "ceiling", "--bogus"]).status.code(), Some(2));
}

#[test]
fn homotopy_suite_passes() {
    let o = hodgewitt(&["verify", "homotopy", "--p", "3", "--n", "1", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suite"], "homotopy");
    assert_eq!(v["failures"], 0);
}

#[test]
fn ceiling_suite_at_full_size() {
    let o = hodgewitt(&["verify", "ceiling", "--trials", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["config"]["trials"], 10000);
}

#[test]
fn filtration_requires_p() {
    let o = hodgewitt(&["filtration", "--r", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn filtration_rejects_negative_r() {
    let o = hodgewitt(&["filtration", "--p", "2", "--r", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn filtration_lists_generators() {
    let o = hodgewitt(&["filtration", "--p", "2", "--n", "1", "--i", "1", "--r", "1", "--window", "-6:6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let gens = v["generators"].as_array().unwrap();
    assert!(!gens.is_empty());
    assert_eq!(gens.len(), v["memberships"].as_array().unwrap().len());
    assert_eq!(v["variant"], "Fil");
}

#[test]
fn reports_are_deterministic() {
    let run = || {
        let mut v = json(&hodgewitt(&["verify", "witt-equiv", "--seed", "11", "--trials", "40"]));
        v["timestamp"] = Value::Null;
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn out_writes_a_file() {
    let path = std::env::temp_dir().join(format!("hodgewitt-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = hodgewitt(&["verify", "ceiling", "--trials", "20", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "ceiling");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn environment_overrides_defaults() {
    let o = Command::new(env!("CARGO_BIN_EXE_hodgewitt"))
        .args(["verify", "ceiling", "--trials", "20"])
        .env("HODGEWITT_P", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["config"]["p"], 5);
}

//! Runs the metawhit binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn metawhit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metawhit"))
        .args(args)
        .env("METAWHIT_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("metawhit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn describe_four_fold_cover_of_sl2() {
    let v = json(&metawhit(&["describe", "--type", "A1", "--n", "4"]));
    assert_eq!(v["command"], "describe");
    let r = &v["result"];
    assert_eq!(r["gamma_order"], 2);
    assert_eq!(r["lattice_basis"], serde_json::json!([[2]]));
    assert_eq!(r["B"], serde_json::json!([[2]]));
    assert!(r.to_string().contains("\"n_alpha\":4"), "{r}");
}

#[test]
fn whittaker_off_the_dominant_cone_is_zero() {
    let v = json(&metawhit(&["whittaker", "--type", "A1", "--n", "1", "--lambda", "-1"]));
    assert_eq!(v["result"]["dominant"], false);
    assert_eq!(v["result"]["value"]["num"]["terms"], serde_json::json!([]));
}

#[test]
fn latex_format_is_plain_text() {
    let out = metawhit(&["describe", "--type", "A1", "--n", "4", "--format", "latex"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("\\Lambda"), "{s}");
    assert!(serde_json::from_str::<Value>(&s).is_err());
}

#[test]
fn check_passes_on_a2_double_cover() {
    let out = metawhit(&["check", "--type", "A2", "--n", "2", "--Q", "1,1", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn check_reports_the_su3_involution_failure() {
    let out = metawhit(&["check", "--type", "A1", "--n", "2", "--markers", "SU3", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = v["result"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false && c["required"] == true)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.iter().any(|n| n.starts_with("involution")), "{failed:?}");
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["describe", "--type", "Z9", "--n", "2"][..],
        &["whittaker", "--type", "A2", "--n", "2", "--lambda", "1"],
        &["describe", "--type", "A2", "--n", "2", "--Q", "1,2,3"],
        &["describe", "--type", "A1", "--n", "0"],
        &["act", "--type", "A1", "--n", "2", "--word", "s7", "--lambda", "0"],
    ] {
        let out = metawhit(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unknown_config_key_exits_two() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"type": "A1", "n": 2, "colour": 3}"#).unwrap();
    let out = metawhit(&["describe", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn flags_override_config_and_output_goes_to_file() {
    let cfg = scratch("job.json");
    let dest = scratch("out.json");
    std::fs::write(&cfg, r#"{"type": "A1", "n": 3, "lambda": [2]}"#).unwrap();
    let out = metawhit(&[
        "whittaker",
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "2",
        "--output",
        dest.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["config"]["n"], 2);
    assert_eq!(v["result"]["lambda"], serde_json::json!([2]));
    assert_eq!(v["result"]["dominant"], true);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["act", "--type", "A2", "--n", "2", "--word", "s1,s2", "--lambda", "1,0", "--numeric", "--seed", "7"];
    let a = metawhit(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_metawhit"))
        .args(args)
        .env("METAWHIT_WORKERS", "1")
        .output()
        .unwrap();
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = metawhit(&["act", "--type", "A2", "--n", "2", "--word", "s1,s2", "--lambda", "1,0", "--numeric", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn npoly_and_cfun_run() {
    let v = json(&metawhit(&["npoly", "--type", "A1", "--n", "2", "--lambda", "1"]));
    assert_eq!(v["command"], "npoly");
    let v = json(&metawhit(&["cfun", "--type", "A2", "--n", "1", "--word", "s1"]));
    assert_eq!(v["command"], "cfun");
}

//! The installed binary, end to end.

use std::process::{Command, Output};

use serde_json::Value;

fn symstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symstab"))
        .args(args)
        .env_remove("SYMSTAB_FORMAT")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = symstab(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn product_stability_example() {
    let v = json(&["stability", "--surface", "product", "--u", "5/2,1", "--v", "9/2,1"]);
    assert_eq!(v["schema"], "symstab/1");
    assert_eq!(v["verdict"]["mode"], serde_json::json!({"kind": "level", "n": 5}));
    assert_eq!(v["verdict"]["range"], serde_json::json!([1, 7]));
}

#[test]
fn sets_files_round_trip_through_diff() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--surface", "blowup:3", "--floor", "4"];
    let mut paths = Vec::new();
    for (name, u) in [("u.json", "7,3,2,1"), ("v.json", "7,4,2,1")] {
        let mut a = vec!["sets", "--u", u, "--format", "json"];
        a.extend(args);
        let out = symstab(&a);
        assert_eq!(out.status.code(), Some(0));
        let path = dir.path().join(name);
        std::fs::write(&path, &out.stdout).unwrap();
        paths.push(path.to_str().unwrap().to_owned());
    }
    let from_files = json(&["diff", "--left", &paths[0], "--right", &paths[1]]);
    let mut direct = vec!["diff", "--u", "7,3,2,1", "--v", "7,4,2,1"];
    direct.extend(args);
    let direct = json(&direct);
    assert_eq!(from_files["only_u"]["classes"], direct["only_u"]["classes"]);
    assert_eq!(from_files["only_v"]["classes"], direct["only_v"]["classes"]);
    assert_eq!(from_files["floor"], direct["floor"]);
}

#[test]
fn exit_codes() {
    let ok = symstab(&["surface", "--surface", "blowup:2"]);
    assert_eq!(ok.status.code(), Some(0));

    let decimal = symstab(&["stability", "--surface", "product", "--u", "2.5,1", "--v", "9/2,1"]);
    assert_eq!(decimal.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&decimal.stderr).contains("5/2"));

    let outside = symstab(&["sets", "--surface", "blowup:1", "--u", "1,2"]);
    assert_eq!(outside.status.code(), Some(2));

    let unknown = symstab(&["surface", "--surface", "torus"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["certify", "--surface", "blowup:4", "--u", "11,11/2,3,2,1", "--v", "11,9/2,3,2,1", "--format", "json"];
    let a = symstab(&args);
    let b = symstab(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn format_from_environment_and_config() {
    let out = Command::new(env!("CARGO_BIN_EXE_symstab"))
        .args(["surface", "--surface", "product"])
        .env("SYMSTAB_FORMAT", "json")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["surface"]["kind"], "product");

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"surface": "blowup:2", "u": "3,1,1"}"#).unwrap();
    let v = json(&["sets", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["surface"]["k"], 2);
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-cy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1, "one JSON document: {text}");
    (
        serde_json::from_str(&text).unwrap(),
        out.status.code().unwrap(),
    )
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const P4: &str = r#"{"name":"P4","rays":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1],[-1,-1,-1,-1]],
"max_cones":[[1,2,3,4],[0,2,3,4],[0,1,3,4],[0,1,2,4],[0,1,2,3]]}"#;

#[test]
fn quintic_hodge_json() {
    let out = run(&["hodge", "catalog:X5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(r#""h11":1,"h21":101"#), "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["result"]["hodge"]["euler"], -200);
    assert_eq!(v["result"]["cross_checks"]["euler"]["passed"], true);
    assert!(v["error"].is_null());
}

#[test]
fn json_output_is_byte_stable() {
    let args = [
        "hodge",
        "catalog:X6",
        "--format",
        "json",
        "--oracle",
        "--all-paths",
    ];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    let ids: Vec<&str> = v["assumptions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"q-ring-provenance"), "{ids:?}");
}

#[test]
fn p4_fan_check() {
    let path = scratch("p4.json", P4);
    let (v, code) = json(&["fan", "check", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    for key in ["simplicial", "complete", "fano", "smooth"] {
        assert_eq!(r[key], true, "{key}");
    }
    assert_eq!(r["class_group"]["rank"], 1);
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn table_format_is_default() {
    let path = scratch("p4-table.json", P4);
    let out = run(&["fan", "check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fano        yes"), "{text}");
}

#[test]
fn x10_certificate() {
    let (v, code) = json(&["smooth", "catalog:X10", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "smooth");
    let rays = v["result"]["per_ray"].as_array().unwrap();
    assert_eq!(rays.len(), 5);
    assert!(rays.iter().all(|r| r["path"] == "nef-and-big"));

    let (v, _) = json(&[
        "smooth",
        "catalog:X10",
        "--path",
        "direct-koszul-vanishing",
        "--format",
        "json",
    ]);
    assert_eq!(v["result"]["verdict"], "smooth");
}

#[test]
fn k3_is_rejected() {
    let k3 = r#"{"name":"K3","fan_ref":"catalog:X5","hypersurfaces":[[2,0,0,0,0],[3,0,0,0,0]],"assume_smooth":true}"#;
    let path = scratch("k3.json", k3);
    let p = path.to_str().unwrap();
    let (v, code) = json(&["smooth", p, "--format", "json"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["verdict"], "rejected");
    assert_eq!(v["error"]["kind"], "rejected");
    let (v, code) = json(&["hodge", p, "--format", "json"]);
    assert_eq!(code, 1);
    assert!(!v["error"].is_null());
}

#[test]
fn cohomology_and_intersections() {
    let (v, code) = json(&["coh", "catalog:X5", "-D", "-5,0,0,0,0", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dims"], serde_json::json!([0, 0, 0, 0, 1]));

    let (v, _) = json(&[
        "coh",
        "catalog:X5",
        "-D",
        "2,0,0,0,0",
        "--method",
        "nef-fastpath",
        "--format",
        "json",
    ]);
    assert_eq!(v["result"]["dims"][0], 15);
    assert_eq!(v["result"]["method"], "nef-fastpath");

    let (v, code) = json(&[
        "coh",
        "catalog:X5",
        "-D",
        "-1,0,0,0,0",
        "--method",
        "nef-fastpath",
        "--format",
        "json",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "invalid-input");

    let (v, _) = json(&[
        "intersect",
        "catalog:X6",
        "-m",
        "4,0,0,0,0",
        "--format",
        "json",
    ]);
    assert_eq!(v["result"]["value"], "1/2");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["coh", "/nonexistent.json", "-D", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let (v, code) = json(&["smooth", "catalog:nope", "--format", "json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "unknown-entry");

    let bad = scratch(
        "not-a-fan.json",
        r#"{"rays":[[1,0],[0,1],[-1,0],[1,1]],"max_cones":[[0,1],[1,2],[0,3]]}"#,
    );
    let (v, code) = json(&["fan", "check", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "not-a-fan");
}

#[test]
fn emit_round_trips_through_smooth() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("x8.json");
    let out = run(&["catalog", "emit", "X8", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (v, code) = json(&["hodge", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["hodge"]["h21"], 149);

    let (v, _) = json(&["catalog", "list", "--format", "json"]);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 10);
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn check<'a>(report: &'a Value, command: &str, name: &str) -> &'a Value {
    report["sections"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["command"] == command)
        .and_then(|s| {
            s["checks"]
                .as_array()
                .unwrap()
                .iter()
                .find(|c| c["name"] == name)
        })
        .unwrap_or_else(|| panic!("no check {command}/{name}"))
}

const LINE: &str = r#"{"dimension":1,"scatterers":[{"position":[0.0],"alpha":1.0}]}"#;
const PLANE: &str = r#"{"dimension":2,"scatterers":[
    {"position":[0,0],"alpha":0.5},{"position":[0.7,0.2],"alpha":-0.3},{"position":[-0.4,0.6],"alpha":1.1}]}"#;

#[test]
fn strong_tev_line_example() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", LINE);
    let out = mps(&["strong-tev", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    let res = &r["sections"][0]["results"];
    assert_eq!(res["multiplicity"], 1);
    let u = &res["eigenvectors"][0];
    // nodes are ordered {+1, −1}; u ∝ (1, −1)
    let (a, b) = (u[0][0].as_f64().unwrap(), u[1][0].as_f64().unwrap());
    assert!((a + b).abs() < 1e-15 && a.abs() > 0.7);
    assert!(u[0][1].as_f64().unwrap().abs() < 1e-15);
    let c = check(&r, "strong-tev", "closed_form_fixed_point");
    assert!(c["value"].as_f64().unwrap() <= 1e-14);
    assert_eq!(c["tolerance"], 1e-14);
    assert!(
        check(&r, "strong-tev", "fixed_point_residual")["value"]
            .as_f64()
            .unwrap()
            <= 1e-14
    );
}

#[test]
fn resonance_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"dimension":1,"scatterers":[{"position":[0.0],"alpha":0.0},{"position":[3.141592653589793],"alpha":0.0}]}"#,
    );
    let out = mps(&["smatrix", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["error"]["kind"], "resonance");
    assert_eq!(r["error"]["modulus"], 1.0);
    assert_eq!(r["passed"], false);
    // away from the resonance the same scatterer is fine
    assert_eq!(
        mps(&["smatrix", "--config", &cfg, "--energy-re", "1.3"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn report_all_inert_configuration() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"dimension":3,"scatterers":[{"position":[0,0,0],"alpha":"inf"},{"position":[1,0,0],"alpha":"inf"}]}"#,
    );
    let out = mps(&["report-all", "--config", &cfg, "--nodes", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["sections"].as_array().unwrap().len(), 5);
    assert_eq!(check(&r, "smatrix", "defect_rank")["value"], 0.0);
    assert_eq!(check(&r, "strong-tev", "defect_rank")["value"], 0.0);
    assert_eq!(r["config"]["scatterers"][0]["alpha"], "inf");
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", PLANE);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = mps(&[
            "report-all",
            "--config",
            &cfg,
            "--out",
            p.to_str().unwrap(),
            "--csv",
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(a.with_extension("csv")).unwrap(),
        fs::read(b.with_extension("csv")).unwrap()
    );
    let csv = fs::read_to_string(a.with_extension("csv")).unwrap();
    assert!(csv.starts_with("command,check,value,relation,tolerance,passed\n"));
    assert!(csv.contains("strong-tev,multiplicity,6.1e1,ge,6.1e1,true"));
}

#[test]
fn defaults_are_echoed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", LINE);
    let r = json(&mps(&["green", "--config", &cfg]));
    let c = &r["config"];
    assert_eq!(
        (c["nodes"].as_u64(), c["waves"].as_u64(), c["seed"].as_u64()),
        (Some(64), Some(16), Some(42))
    );
    assert_eq!(c["tol"], 1e-10);
    assert_eq!(c["energy"], serde_json::json!([1.0, 0.0]));
    assert_eq!(r["tool"], "mps");
    assert!(r["version"].is_string());
}

#[test]
fn invalid_input_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let dup = write(
        dir.path(),
        "dup.json",
        r#"{"dimension":2,"scatterers":[{"position":[1,2],"alpha":1},{"position":[1,2],"alpha":2}]}"#,
    );
    let out = mps(&["green", "--config", &dup]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("/scatterers/1/position") && err.contains("scatterers 0 and 1"),
        "{err}"
    );

    let plane = write(dir.path(), "p.json", PLANE);
    // complex energy is not accepted by the real-energy pipelines
    assert_eq!(
        mps(&["smatrix", "--config", &plane, "--energy-im", "0.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mps(&["green", "--config", &plane, "--energy-im", "0.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mps(&["green", "--config", "/nonexistent.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mps(&["green", "--config", &plane, "--csv"]).status.code(),
        Some(1)
    );
    assert_eq!(
        mps(&["frobnicate", "--config", &plane]).status.code(),
        Some(1)
    );
    assert_eq!(
        mps(&["green", "--config", &plane, "--tol", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn failed_invariant_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", PLANE);
    // a rank threshold this loose admits vectors with sizeable moments
    let out = mps(&["strong-tev", "--config", &cfg, "--tol", "0.9"]);
    assert_eq!(out.status.code(), Some(3));
    let r = json(&out);
    assert_eq!(r["passed"], false);
    assert_eq!(
        check(&r, "strong-tev", "fixed_point_residual")["passed"],
        false
    );
}

#[test]
fn interior_tev_at_complex_energy() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"dimension":3,"scatterers":[{"position":[0.3,0,-0.2],"alpha":0.5},{"position":[-0.4,0.5,0.1],"alpha":-1}],
            "energy":{"re":1,"im":0.5},"waves":10}"#,
    );
    let out = mps(&["interior-tev", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["sections"][0]["results"]["basis_size"], 8);
    // report-all skips the pipelines that need a real energy
    let all = json(&mps(&["report-all", "--config", &cfg]));
    let skipped: Vec<&str> = all["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["command"].as_str().unwrap())
        .collect();
    assert_eq!(skipped, ["amplitude", "smatrix", "strong-tev"]);
    assert_eq!(all["passed"], true);

    let line = write(dir.path(), "l.json", LINE);
    let r = json(&mps(&[
        "interior-tev",
        "--config",
        &line,
        "--energy-re",
        "-4",
    ]));
    let res = &r["sections"][0]["results"];
    assert_eq!(res["waves"], 2);
    assert_eq!(res["sine_witness"]["interior_check"]["passed"], true);
}

#[test]
fn emit_matrices() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", PLANE);
    let r = json(&mps(&[
        "smatrix",
        "--config",
        &cfg,
        "--nodes",
        "8",
        "--emit-matrices",
    ]));
    let s = r["sections"][0]["results"]["s_matrix"].as_array().unwrap();
    assert_eq!(s.len(), 8);
    assert_eq!(s[0].as_array().unwrap().len(), 8);
    assert_eq!(s[0][0].as_array().unwrap().len(), 2);
    let plain = json(&mps(&["smatrix", "--config", &cfg, "--nodes", "8"]));
    assert!(plain["sections"][0]["results"].get("s_matrix").is_none());
}

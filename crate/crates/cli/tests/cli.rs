use std::process::{Command, Output};

use serde_json::Value;

fn tg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tg")).args(args).output().expect("tg runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn verify_catalog_entries_exit_zero() {
    for name in ["su2-biinvariant", "su3-hkt", "g2-standard", "spin7-standard", "su3-fibration"] {
        let o = tg(&["verify", "--example", name]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn json_report_has_stable_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = tg(&["verify", "--example", "su2-biinvariant", "--format", "json", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["tool"], "tg");
    assert_eq!(v["command"], "verify");
    assert_eq!(v["passed"], true);
    assert!(v["sections"].as_array().unwrap().len() >= 5);
}

#[test]
fn exported_geometry_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let geo = dir.path().join("su3.json");
    let o = tg(&["catalog", "--example", "su3-hkt", "--output", geo.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = tg(&["verify", "--input", geo.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn decompose_reports_kernel_and_blocks() {
    let o = tg(&["decompose", "--example", "su2-plus-abelian3"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("kernel 3, blocks [su(2)]"));
}

#[test]
fn non_closed_torsion_fails_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.json");
    // [e0, e1] = e3 with H = e012 has dH ≠ 0
    std::fs::write(
        &p,
        r#"{"name":"bad","dim":4,"brackets":[[3,0,1,1.0]],"torsion":[[0,1,2,1.0]]}"#,
    )
    .unwrap();
    let o = tg(&["decompose", "--input", p.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 1, "{text}");
    assert!(text.contains("hypotheses not met"));
}

#[test]
fn malformed_input_exits_two_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.json");
    let out = dir.path().join("r.json");
    std::fs::write(&p, "{ not json").unwrap();
    let o = tg(&["verify", "--input", p.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());

    std::fs::write(&p, r#"{"name":"x","dim":3,"brackets":[[0,1,2,1.0]],"torsion":[],"extra":1}"#).unwrap();
    assert_eq!(code(&tg(&["verify", "--input", p.to_str().unwrap()])), 2);
    assert_eq!(code(&tg(&["verify", "--example", "missing"])), 2);
    assert_eq!(code(&tg(&["verify"])), 2);
    assert_eq!(code(&tg(&["verify", "--example", "su2su2", "--tol", "-1"])), 2);
}

#[test]
fn topology_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    std::fs::write(&p, r#"{"k":0,"n":[],"chi":2,"tau":0}"#).unwrap();
    let o = tg(&["topology", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("no HKT fibration"));

    std::fs::write(&p, r#"{"k":1,"n":[1],"chi":3,"tau":-1}"#).unwrap();
    let o = tg(&["topology", "--input", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"]["classes"]["c2e"], -1.0);
}

#[test]
fn dilaton_preset_writes_solution() {
    let o = tg(&["dilaton", "--example", "sin-bump", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"]["solution"]["u"].as_array().unwrap().len(), 64 * 64);
    assert_eq!(code(&tg(&["dilaton", "--example", "sawtooth"])), 2);
}

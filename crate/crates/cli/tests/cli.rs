use std::path::Path;
use std::process::{Command, Output};

use qradius_core::sectorial::{gen, GenKind, GenSpec};
use serde_json::Value;

fn qradius(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qradius")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const JORDAN: &str = r#"{"rows":2,"cols":2,"data":[[0,0],[1,0],[0,0],[0,0]]}"#;

#[test]
fn jordan_radius() {
    let dir = tempfile::tempdir().unwrap();
    let j = write(dir.path(), "jordan2.json", JORDAN);
    let out = qradius(&["qnr", "radius", "--matrix", &j, "--q", "0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.9).abs() < 1e-9);
    assert_eq!(v["config"]["args"]["q"], "0.6");
    assert!(v["note"].is_null());

    let out = qradius(&["qnr", "radius", "--matrix", &j, "--q", "0.36+0.48i"]);
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.9).abs() < 1e-9);
    assert!(v["note"].as_str().unwrap().contains("|q|"));
}

#[test]
fn diagonal_sector_angle() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "d.json", r#"{"rows":2,"cols":2,"data":[[1,1],[0,0],[0,0],[1,-1]]}"#);
    let v = json(&qradius(&["sector", "angle", "--matrix", &d]));
    assert!((v["alpha_min"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn generated_file_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.json");
    let o = qradius(&["mat", "gen", "--kind", "dominated_quadruple", "--n", "3", "--alpha", "0.4", "--seed", "7", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let spec = GenSpec::new(GenKind::DominatedQuadruple, 3, 7).alpha(0.4);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), gen(&spec).unwrap().to_json_string());
    let v = json(&o);
    assert!(v["sector_angles"].as_array().unwrap().iter().all(|a| a.as_f64().unwrap() <= 0.4 + 1e-9));
}

#[test]
fn means_and_funcalc() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    qradius(&["mat", "gen", "--kind", "sectorial", "--n", "3", "--alpha", "0.5", "--seed", "1", "-o", a.to_str().unwrap()]);
    let a = a.to_str().unwrap();
    let v = json(&qradius(&["means", "compute", "--op", "geometric", "--a", a, "--b", a]));
    let m = qradius_core::CMatrix::from_json_str(&v["result"].to_string()).unwrap();
    let orig = qradius_core::CMatrix::from_json_str(&std::fs::read_to_string(a).unwrap()).unwrap();
    assert!(m.dist(&orig) < 1e-8);
    let sq = dir.path().join("sq.json");
    let o = qradius(&["funcalc", "--f", "power:0.5", "--matrix", a, "-o", sq.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = qradius_core::CMatrix::from_json_str(&std::fs::read_to_string(&sq).unwrap()).unwrap();
    assert!((&s * &s).dist(&orig) < 1e-8);
}

#[test]
fn range_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let j = write(dir.path(), "j.json", JORDAN);
    let pts = dir.path().join("points.csv");
    let v = json(&qradius(&["qnr", "range", "--matrix", &j, "--q", "0.5", "--samples", "300", "--seed", "2", "-o", pts.to_str().unwrap()]));
    assert_eq!(v["points"], 300);
    let text = std::fs::read_to_string(&pts).unwrap();
    assert_eq!(text.lines().next(), Some("re,im,on_hull"));
    assert_eq!(text.lines().count(), 301);
    assert!(v["max_modulus"].as_f64().unwrap() <= (1.0 + 0.75f64.sqrt()) / 2.0 + 1e-12);
}

#[test]
fn verify_run_single_trial() {
    let out = qradius(&["verify", "run", "--suite", "all", "--trials", "1", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["predicates"].as_array().unwrap().len(), 25);

    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.csv");
    let out = qradius(&["verify", "run", "--suite", "means-axioms", "--trials", "2", "--report", rep.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["fails"], 0);
    assert_eq!(std::fs::read_to_string(&rep).unwrap().lines().count(), 4);
}

#[test]
fn list_and_stress() {
    let v = json(&qradius(&["verify", "list"]));
    assert_eq!(v["predicates"].as_array().unwrap().len(), 28);
    let out = qradius(&["verify", "stress", "--id", "P10", "--iterations", "50", "--alpha", "0.6", "--target", "lower"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["worst"]["worst"], "lower");
}

#[test]
fn invalid_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let j = write(dir.path(), "j.json", JORDAN);
    let bad = write(dir.path(), "bad.json", r#"{"rows":2,"cols":2,"data":[]}"#);
    let neg = write(dir.path(), "neg.json", r#"{"rows":2,"cols":2,"data":[[-1,0],[0,0],[0,0],[1,0]]}"#);
    for args in [
        vec!["qnr", "radius", "--matrix", &j, "--q", "2"],
        vec!["qnr", "radius", "--matrix", &j, "--q", "zero"],
        vec!["qnr", "radius", "--matrix", &bad, "--q", "0.5"],
        vec!["qnr", "radius", "--matrix", "missing.json", "--q", "0.5"],
        vec!["sector", "angle", "--matrix", &neg],
        vec!["mat", "gen", "--kind", "unitary", "--n", "3", "--seed", "1", "-o", "x.json"],
        vec!["verify", "run", "--suite", "nope", "--trials", "1"],
        vec!["verify", "stress", "--id", "P08"],
        vec!["qnr", "frobnicate"],
    ] {
        let out = qradius(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

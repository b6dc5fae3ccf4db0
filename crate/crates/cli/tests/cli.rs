use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaingeom")).args(args).output().expect("binary runs")
}

fn certificate(args: &[&str], name: &str) -> (Output, Value) {
    let path = std::env::temp_dir().join(format!("chaingeom-cli-{}-{name}.json", std::process::id()));
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.push("--emit");
    full.push(&p);
    let out = run(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&out.stderr)));
    let _ = std::fs::remove_file(&path);
    (out, serde_json::from_str(&text).unwrap())
}

#[test]
fn analyze_gf9_in_m2_gf3() {
    let (out, v) = certificate(&["analyze", "--ring", "m2:gf(3)", "--field", "gf(9)", "--embed", "regular", "--rep", "natural"], "gf9");
    assert!(out.status.success());
    assert_eq!(v["verdict"]["verdict"], "neither");
    let s = &v["spreads"];
    assert_eq!(s["checked"], s["regular_spread"]);
    assert_eq!(s["checked"], 2106);
    assert_eq!(v["counts"]["chain_size"], 10);
}

#[test]
fn analyze_scalar_m2_gf2() {
    let (out, v) = certificate(&["analyze", "--ring", "m2:gf(2)", "--field", "gf(2)", "--embed", "scalar", "--rep", "natural"], "m2");
    assert!(out.status.success());
    assert_eq!(v["verdict"]["verdict"], "regulus");
    assert_eq!(v["counts"]["points"], 35);
    assert_eq!(v["schema_version"], "chaingeom-cert/1");
    assert!(v["timings"].is_null());
}

#[test]
fn analyze_dual_reports_epsilon_transversal() {
    let (out, v) = certificate(&["analyze", "--ring", "dual:gf(2)", "--field", "gf(2)", "--rep", "regular"], "dual");
    assert!(out.status.success());
    let ts = v["transversals"].as_array().unwrap();
    // U = R with basis 1, ε; Kε is spanned by (0, 1)
    assert!(ts.iter().any(|t| t["u"] == serde_json::json!([0, 1])), "{ts:?}");
}

#[test]
fn only_filter_runs_one_check() {
    let (out, v) = certificate(&["verify-suite", "--only", "thm4.4"], "only");
    assert!(out.status.success());
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["id"], "thm4.4");
    assert_eq!(checks[0]["passed"], true);
}

#[test]
fn morphism_tables() {
    let base = ["morphism", "--ring", "m2:gf(2)", "--field", "gf(4)", "--embed", "regular"];
    let (out, v) = certificate(&base, "identity");
    assert!(out.status.success());
    let verdicts = v["morphism_reports"][0]["verdicts"].as_object().unwrap();
    assert!(verdicts.values().all(|b| b == true));

    let mut omega = base.to_vec();
    omega.extend(["--omega", "id", "--strict"]);
    let (out, v) = certificate(&omega, "omega");
    assert!(out.status.success());
    assert!(v["morphism_reports"][0]["verdicts"].as_object().unwrap().values().all(|b| b == true));

    let mut broken = base.to_vec();
    broken.extend(["--target-field", "gf(2)", "--target-embed", "scalar"]);
    let out = run(&broken);
    assert_eq!(out.status.code(), Some(4), "inclusion condition is a domain error");
    broken.push("--force");
    let (out, v) = certificate(&broken, "broken");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(v["morphism_reports"][0]["verdicts"]["chains_into_chains"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["points", "--ring", "m2:gf(6)"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--ring", "m2:gf(2)", "--field", "gf(2)", "--rep", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify-suite", "--only", "no.such.check"]).status.code(), Some(2));
    assert_eq!(run(&["chains", "--ring", "m2:gf(2)", "--field", "gf(2)", "--cap", "10"]).status.code(), Some(3));
    let out = run(&["points", "--ring", "dual:gf(2)"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("points       6"));
}

#[test]
fn dot_output() {
    let path = std::env::temp_dir().join(format!("chaingeom-cli-{}.dot", std::process::id()));
    let out = run(&["points", "--ring", "gf(3)", "--emit-dot", path.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    assert!(dot.contains("graph"));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cp1_core::toda::Engine;
use cp1_gw::cache;
use serde_json::Value;

fn gw(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cp1-gw"));
    cmd.env_remove(cache::CACHE_ENV).args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    gw(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn cache_arg(path: &Path) -> String {
    path.to_str().unwrap().to_string()
}

#[test]
fn invariant_values() {
    for (args, value) in [
        (vec!["--genus", "0", "--degree", "1", "--q", "0"], "1/1"),
        (vec!["--genus", "1", "--degree", "1", "--q", "2"], "1/24"),
        (vec!["--genus", "2", "--degree", "1", "--q", "4"], "1/1920"),
        (vec!["--genus", "0", "--degree", "1", "--p", "1"], "-2/1"),
        (vec!["--genus", "0", "--degree", "2", "--q", "2"], "1/4"),
        (vec!["--genus", "1", "--degree", "1", "--q", "1"], "0/1"),
    ] {
        let mut full = vec!["invariant"];
        full.extend(args.iter().copied());
        let out = run(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&out)["value"], value, "{args:?}");
    }
}

#[test]
fn explain_reports_dimensions() {
    let out = run(&["invariant", "--genus", "1", "--degree", "1", "--q", "1", "--explain"]);
    let v = json(&out);
    assert_eq!(v["provenance"], "dimension-constraint");
    assert_eq!(v["explain"]["dimension_matches"], false);
    assert_eq!(v["explain"]["virtual_dimension"], 3);
    assert_eq!(v["explain"]["insertion_degree"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["invariant", "--genus", "0", "--degree", "0", "--q", "0"]).status.code(), Some(2));
    assert_eq!(run(&["invariant", "--genus", "0", "--degree", "7", "--q", "12"]).status.code(), Some(3));
    assert_eq!(
        run(&["--limit-degree", "8", "invariant", "--genus", "0", "--degree", "7", "--q", "12"]).status.code(),
        Some(0)
    );
    assert_eq!(run(&["invariant", "--genus", "x"]).status.code(), Some(1));
    assert_eq!(run(&["invariant", "--genus", "0", "--degree", "1", "--q", "a"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let out = run(&["verify", "--suite", "hurwitz", "--max-n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let checks = json(&out)["checks"].as_array().unwrap().clone();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn csv_output() {
    let out = run(&["--format", "csv", "invariant", "--genus", "0", "--degree", "1", "--p", "1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "num,den\n-2,1\n");
    let out = run(&["--format", "csv", "series", "--degree", "1", "--q-vars", "1", "--p-vars", "0", "--eps-order", "4", "--var-order", "8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,y1,num,den"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows, ["0,0,1,1", "2,2,1,24", "4,4,1,1920"]);
}

#[test]
fn series_json_has_sorted_terms() {
    let out = run(&["series", "--degree", "2", "--q-vars", "1", "--p-vars", "1", "--eps-order", "2", "--var-order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["variables"], serde_json::json!(["eps", "y1", "z1"]));
    let exps: Vec<Value> = v["terms"].as_array().unwrap().iter().map(|t| t["exp"].clone()).collect();
    assert!(!exps.is_empty());
    let mut sorted = exps.clone();
    sorted.sort_by_key(|e| e.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect::<Vec<_>>());
    assert_eq!(exps, sorted);
}

#[test]
fn cache_round_trip_preserves_the_memo() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = cache_arg(&path);
    let out = run(&["--cache", &p, "invariant", "--genus", "1", "--degree", "2", "--q", "2", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));

    let mut engine = Engine::new();
    let count = cache::load(&mut engine, &path).unwrap();
    assert!(count > 0);
    let mut fresh = Engine::new();
    for (key, series) in engine.memo() {
        let ys = key.y_names();
        let zs = key.z_names();
        let ys: Vec<&str> = ys.iter().map(String::as_str).collect();
        let zs: Vec<&str> = zs.iter().map(String::as_str).collect();
        assert_eq!(&fresh.multipoint(key.d, &ys, &zs, &key.spec).unwrap(), series);
    }
    let bytes = fs::read(&path).unwrap();
    assert_eq!(cache::to_bytes(&engine), bytes);

    let warm = run(&["--cache", &p, "invariant", "--genus", "1", "--degree", "2", "--q", "2", "--p", "3"]);
    assert_eq!(warm.stdout, out.stdout);
    assert_eq!(fs::read(&path).unwrap(), bytes);

    let info = run(&["--cache", &p, "cache", "info"]);
    assert!(json(&info)["value"].as_str().unwrap().starts_with(&count.to_string()));
    assert_eq!(run(&["--cache", &p, "cache", "clear"]).status.code(), Some(0));
    assert!(!path.exists());
}

#[test]
fn version_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = cache_arg(&path);
    run(&["--cache", &p, "invariant", "--genus", "0", "--degree", "1", "--q", "0"]);
    let mut v: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    v["format_version"] = Value::from(cache::FORMAT_VERSION + 1);
    fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    let out = run(&["--cache", &p, "invariant", "--genus", "0", "--degree", "1", "--q", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("version"));
}

#[test]
fn tampered_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = cache_arg(&path);
    run(&["--cache", &p, "invariant", "--genus", "1", "--degree", "1", "--q", "2"]);
    let mut v: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    let term = &mut v["entries"][0]["series"]["terms"][0];
    term["num"] = Value::from("12345");
    fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    let out = run(&["--cache", &p, "invariant", "--genus", "1", "--degree", "1", "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checksum"));

    fs::write(&path, b"not json").unwrap();
    assert_eq!(run(&["--cache", &p, "cache", "info"]).status.code(), Some(1));
}

#[test]
fn environment_variable_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let env_path = dir.path().join("env.json");
    let flag_path = dir.path().join("flag.json");
    let args = ["invariant", "--genus", "0", "--degree", "1", "--q", "0"];

    let out = gw(&args).env(cache::CACHE_ENV, &env_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(env_path.exists());

    fs::remove_file(&env_path).unwrap();
    let mut with_flag = vec!["--cache", flag_path.to_str().unwrap()];
    with_flag.extend(args);
    let out = gw(&with_flag).env(cache::CACHE_ENV, &env_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(flag_path.exists());
    assert!(!env_path.exists());
}

#[test]
fn degree_zero_and_dimension_examples() {
    let out = run(&["invariant", "--genus", "1", "--degree", "0", "--p", "1"]);
    assert_eq!(json(&out)["value"], "1/12");
    assert_eq!(json(&out)["provenance"], "degree-zero-closed-form");
    let out = run(&["invariant", "--genus", "1", "--degree", "1", "--q", "3", "--explain"]);
    assert_eq!(json(&out)["value"], "0/1");
    assert_eq!(json(&out)["explain"]["dimension_matches"], false);
}

#[test]
fn degree_zero_series_examples() {
    let out = run(&["series", "--degree", "0", "--q-vars", "1", "--p-vars", "0", "--eps-order", "2", "--var-order", "4"]);
    let v = json(&out);
    let principal = v["principal"].as_array().unwrap();
    assert!(principal.iter().any(|t| t["w_exp"] == -2 && t["num"] == "1" && t["den"] == "1"));
    let out = run(&["series", "--degree", "0", "--q-vars", "2", "--p-vars", "1", "--eps-order", "2", "--var-order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["terms"].as_array().unwrap().is_empty());
}

#[test]
fn hodge_examples() {
    for (g, class, psi, value) in [
        ("1", "lambda_{g-1}", "1", "1/24"),
        ("2", "lambda_g", "2", "7/5760"),
        ("1", "lambda_g", "0,0,0", "0/1"),
        ("1", "lambda_g", "1,1,0", "1/12"),
    ] {
        let out = run(&["hodge", "--genus", g, "--class", class, "--psi", psi]);
        assert_eq!(out.status.code(), Some(0), "{g} {class} {psi}");
        assert_eq!(json(&out)["value"], value, "{g} {class} {psi}");
    }
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "--suite", "hurwitz", "--max-n", "5"],
        vec!["verify", "--suite", "degree0", "--max-n", "4"],
        vec!["verify", "--suite", "toda", "--max-genus", "2"],
        vec!["--format", "csv", "verify", "--suite", "hodge"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

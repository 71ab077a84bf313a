use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use fibered_core::group::build_group;
use fibered_core::serial::ElementJson;
use fibered_core::Element;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibered")).args(args).output().expect("spawn fibered")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fibered-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    d
}

#[test]
fn group_summaries() {
    let d8 = json(&["group", "D8"]);
    assert_eq!(d8["atoric"], true);
    assert_eq!(d8["class"], "quasi_extraspecial");
    assert_eq!(d8["atoric_part"]["name"], "D8");
    let c2 = json(&["group", "C2"]);
    assert_eq!(c2["atoric"], false);
    assert_eq!(c2["atoric_part"]["order"], 1);
    assert_eq!(json(&["group", "C9"])["class"], "cyclic");
    assert_eq!(json(&["group", "Q8"])["class"], "quasi_extraspecial");
    assert!(json(&["group", "C6"]).get("atoric").is_none());
}

#[test]
fn idempotent_families() {
    let phi = json(&["idem", "C4", "phi"]);
    assert_eq!(phi["elements"].as_array().unwrap().len(), 3);
    assert_eq!(phi["sum_matches"], true);
    let eps = json(&["idem", "C2", "epsilon"]);
    assert_eq!(eps["elements"].as_array().unwrap().len(), 2);
    assert_eq!(eps["sum_target"], "the identity");
    assert_eq!(eps["sum_matches"], true);
    let c = json(&["idem", "D8", "cM"]);
    assert_eq!(c["elements"].as_array().unwrap().len(), 3);
    let one = json(&["idem", "Q8", "cM", "--M", "Q8"]);
    assert_eq!(one["elements"].as_array().unwrap().len(), 1);
    let b = json(&["idem", "D8", "bL"]);
    assert_eq!(b["sum_matches"], true);
    let text = String::from_utf8(run(&["idem", "C2", "epsilon"]).stdout).unwrap();
    assert!(text.contains("(2 elements)"));
    assert!(text.contains("sum is the identity: true"));
}

#[test]
fn element_json_round_trips() {
    let g = build_group("Q8").unwrap();
    let out = json(&["idem", "Q8", "epsilon"]);
    for e in out["elements"].as_array().unwrap() {
        let j: ElementJson = serde_json::from_value(e["element"].clone()).unwrap();
        let x: Element = j.to_element(&g, &g).unwrap();
        assert_eq!(serde_json::to_value(ElementJson::from_element(&x)).unwrap(), e["element"]);
    }
}

#[test]
fn decomposition_of_c2() {
    let out = run(&["verify", "C2", "--suite", "decomposition"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dimensions: [2, 1]"), "{text}");
    assert_eq!(json(&["decompose", "C2"])["total_rank"], 3);
}

#[test]
fn verification_suites_pass() {
    for suite in ["mackey", "phi", "epsilon", "blocks", "decomposition", "atoric", "resolution"] {
        let r = json(&["verify", "D8", "--suite", suite, "--samples", "20"]);
        let checks = r["checks"].as_array().unwrap();
        assert!(!checks.is_empty(), "{suite}");
        assert!(checks.iter().all(|c| c["status"] == "pass"), "{suite}: {r}");
    }
}

#[test]
fn resolutions() {
    let r = json(&["resolve", "1", "Q8"]);
    assert_eq!(r["witness"]["Q"], "Q8");
    assert_eq!(r["witness"]["S"], Value::Array(vec![]));
    assert_eq!(r["witness"]["certificate"]["nonzero"], true);
    assert_eq!(r["catalog_bound"], 32);
    let none = json(&["resolve", "1", "C4 x C4", "--max-order", "16"]);
    assert_eq!(none["witness"], "none-in-catalog");
    assert_eq!(none["catalog_bound"], 16);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["group", "C7 x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["resolve", "1", "C2 x C2"]).status.code(), Some(2));
    assert_eq!(run(&["--max-lattice", "4", "idem", "D8", "etilde"]).status.code(), Some(3));
    assert_eq!(run(&["group", "D8"]).status.code(), Some(0));
}

#[test]
fn cache_hits_match_cold_runs() {
    let dir = scratch("cache");
    let d = dir.to_str().unwrap();
    let args = ["--format", "json", "--cache-dir", d, "idem", "C4 x C2", "phi"];
    let cold = run(&args);
    assert!(cold.status.success());
    let files: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(files.len(), 1);
    assert!(files[0].ends_with("-v1-lattice.json"));
    let warm = run(&args);
    assert_eq!(cold.stdout, warm.stdout);

    let path = dir.join(&files[0]);
    fs::write(&path, "{ not json").unwrap();
    let corrupt = run(&args);
    assert!(corrupt.status.success());
    assert_eq!(cold.stdout, corrupt.stdout);
    let healed: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(healed["subgroups"].is_array());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn mismatched_cache_entries_are_ignored() {
    let dir = scratch("mismatch");
    let d = dir.to_str().unwrap();
    let args = ["--format", "json", "--cache-dir", d, "group", "D8"];
    let cold = run(&args);
    let file = fs::read_dir(&dir).unwrap().next().unwrap().unwrap().path();
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    v["subgroups"] = serde_json::json!([[0], [0, 1, 2]]);
    fs::write(&file, v.to_string()).unwrap();
    let again = run(&args);
    assert!(again.status.success());
    assert_eq!(cold.stdout, again.stdout);
    let _ = fs::remove_dir_all(&dir);
}

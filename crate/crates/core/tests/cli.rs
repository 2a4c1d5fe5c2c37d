use std::process::{Command, Output};

use hyperverma::rep::{verify_relations, ModuleRep};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperverma")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn classify_examples() {
    let out = run(&["classify", "--p", "3", "--r", "1", "--chi", "nilpotent"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["classes"].as_array().unwrap().len(), 6);

    let out = run(&["classify", "--p", "3", "--r", "1", "--chi", "semisimple", "--c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["classes"].as_array().unwrap().len(), 9);

    let out = run(&["classify", "--p", "3", "--r", "0", "--chi", "zero"]);
    let dims: Vec<u64> = json(&out)["classes"].as_array().unwrap().iter().map(|c| c["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 2, 3]);
}

#[test]
fn classify_csv() {
    let out = run(&["classify", "--p", "3", "--r", "0", "--chi", "zero", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("class,lambda,dim,members,dimN,multiplicity"));
}

#[test]
fn verify_passes_and_fault_fails() {
    let out = run(&["verify", "--p", "3", "--r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["passed"], Value::Bool(true));
    let names: Vec<&str> = cert["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    for suite in ["relations", "maximal_submodule", "divisibility", "teenage", "abelian_Gm"] {
        assert!(names.contains(&suite), "{suite} missing");
    }

    let out = run(&["verify", "--p", "3", "--r", "1", "--chi", "nilpotent", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("relations"), "{stderr}");
}

#[test]
fn verify_level_two() {
    assert_eq!(run(&["verify", "--p", "3", "--r", "2"]).status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "--p", "3", "--r", "4", "--chi", "zero"]).status.code(), Some(3));
    assert_eq!(run(&["classify", "--p", "9", "--chi", "zero"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "--p", "3"]).status.code(), Some(1));
    assert_eq!(run(&["export", "--p", "3", "--chi", "zero"]).status.code(), Some(1));
    assert_eq!(run(&["export", "--p", "3", "--chi", "zero", "--lambda", "7,1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn export_round_trips() {
    for args in [
        ["--chi", "zero", "--lambda", "2,1", "--object", "verma"],
        ["--chi", "nilpotent", "--lambda", "1,2", "--object", "quotient"],
        ["--chi", "semisimple", "--lambda", "2,1", "--object", "teenage"],
    ] {
        let mut full = vec!["export", "--p", "3", "--r", "1"];
        full.extend(args);
        let out = run(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let rep = ModuleRep::from_json(&json(&out)).unwrap();
        assert!(verify_relations(&rep).is_ok(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_and_files_match_stdout() {
    let args = ["classify", "--p", "3", "--r", "1", "--chi", "semisimple", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(run(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn abelian_exports() {
    let out = run(&["export", "--p", "3", "--r", "1", "--c", "1", "--object", "gm"]);
    let v = json(&out);
    assert_eq!(v["report"]["idempotents"], 9);
    assert_eq!(v["report"]["rp_figure_matches"], false);
    let out = run(&["export", "--p", "3", "--r", "1", "--c", "2", "--object", "ga"]);
    let v = json(&out);
    assert_eq!(v["report"]["local"], true);
    assert_eq!(v["dim"], 9);
}

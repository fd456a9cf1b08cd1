use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn autolin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autolin")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_exchange() {
    let o = autolin(&["eval", "--function", "fixture:exchange", "--input", "012"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "210");
}

#[test]
fn eval_outside_alphabet_is_usage_error() {
    let o = autolin(&["eval", "--function", "fixture:exchange", "--input", "0x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_compile_within_bound() {
    let o = autolin(&["verify-compile", "--function", "fixture:exchange", "--maxlen", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert!(r["max_steps"].as_u64().unwrap() <= 2 * (8 + r["slack"].as_u64().unwrap() + 2));
    assert!(r["failures"].as_array().unwrap().is_empty());
}

#[test]
fn gold_scan_flags_index_one() {
    let o = autolin(&["family", "scan", "--family", "fixture:gold", "--index-len", "3", "--bmax", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    let one = r["entries"].as_array().unwrap().iter().find(|e| e["index"] == "1").unwrap();
    assert!(one["level"].is_null());
}

#[test]
fn catalog_is_large_and_dumps_reload() {
    let dir = tempfile::tempdir().unwrap();
    let list = json(&autolin(&["fixtures", "list"]));
    let list = list.as_array().unwrap();
    assert!(list.len() >= 10);
    for e in list {
        let name = e["name"].as_str().unwrap();
        let kind = e["kind"].as_str().unwrap();
        let o = autolin(&["fixtures", "dump", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let f = dir.path().join(format!("{}.json", name.replace(':', "_")));
        fs::write(&f, &o.stdout).unwrap();
        let p = path(&f);
        let status = match kind {
            "function" => autolin(&["check-function", "--relation", p]).status.code(),
            "machine" => autolin(&["run-tm", "--machine", p, "--input", "", "--nondet"]).status.code(),
            "family" => autolin(&["family", "telltale", "--family", p, "--b", "1"]).status.code(),
            _ => autolin(&["automaton", "minimize", p]).status.code(),
        };
        assert_ne!(status, Some(2), "{name} does not reload");
    }
}

#[test]
fn dump_is_byte_stable_through_reload() {
    let dir = tempfile::tempdir().unwrap();
    let a = autolin(&["fixtures", "dump", "fixture:exchange"]);
    let f = dir.path().join("g.json");
    fs::write(&f, &a.stdout).unwrap();
    let m = dir.path().join("m.json");
    assert!(autolin(&["compile", "--function", path(&f), "--out", path(&m)]).status.success());
    let again = autolin(&["compile", "--function", "fixture:exchange"]);
    assert_eq!(fs::read(&m).unwrap(), again.stdout);
}

#[test]
fn thm35_language_of_011_contains_012() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fam.json");
    fs::write(&f, autolin(&["fixtures", "dump", "family:thm35"]).stdout).unwrap();
    let l = dir.path().join("l.json");
    fs::write(&l, autolin(&["family", "language", "--family", path(&f), "--index", "011"]).stdout).unwrap();
    assert!(autolin(&["automaton", "accepts", path(&l), "--word", "012"]).status.success());
}

#[test]
fn compile_then_extract_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("tm.json");
    let g = dir.path().join("g.json");
    let orig = dir.path().join("orig.json");
    assert!(autolin(&["compile", "--function", "fixture:delete-first-0", "--out", path(&m)]).status.success());
    let o = autolin(&["extract", "--machine", path(&m), "--rate", "4", "--validate-len", "5", "--out", path(&g)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    fs::write(&orig, autolin(&["fixtures", "dump", "fixture:delete-first-0"]).stdout).unwrap();
    assert!(autolin(&["automaton", "equiv", path(&g), path(&orig)]).status.success());
}

#[test]
fn run_tm_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("trace.json");
    let o = autolin(&["run-tm", "--machine", "fixture:one-sweep", "--input", "01", "--trace", path(&t)]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let trace: Value = serde_json::from_str(&fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(trace.as_array().unwrap().len() as u64, r["steps"].as_u64().unwrap());
}

#[test]
fn check_function_rejects_prefix_relation() {
    let o = autolin(&["check-function", "--relation", "fixture:prefix"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["functional"], false);
    let o = autolin(&["check-function", "--relation", "fixture:append-suffix"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn learn_is_deterministic_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("report.json");
    let args = [
        "learn", "--family", "family:length-excl", "--learner", "twotape:length-bitmap", "--text", "permuted",
        "--target", "00", "--cycles", "200", "--seed", "5",
    ];
    let a = autolin(&[&args[..], &["--report", path(&r)]].concat());
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = autolin(&args);
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_str(&fs::read_to_string(&r).unwrap()).unwrap();
    assert_eq!(report["cycles"].as_array().unwrap().len(), 200);
    assert_eq!(report["budget_violations"], 0);
}

#[test]
fn malformed_json_is_status_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    fs::write(&f, "{\n  \"states\": [1,\n").unwrap();
    let o = autolin(&["automaton", "minimize", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(autolin(&["eval", "--function", "fixture:identity", "--input", "0", "--bogus"]).status.code(), Some(2));
}

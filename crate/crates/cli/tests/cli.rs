use std::process::{Command, Output};

use serde_json::Value;

const DM: &str = r#"{"variables": ["x", "y", "z"], "bracket": [["0", "x"], ["y"]]}"#;

fn porder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_porder")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

#[test]
fn core_report_shape() {
    let out = porder(&["poisson", "core", "--input", DM, "--point", "1,1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], "poisson-strata/1");
    assert_eq!(r["command"], "poisson core");
    assert_eq!(r["result"]["core"], serde_json::json!(["x - y"]));
    assert_eq!(r["result"]["certified"], true);
    assert!(r["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn exit_codes() {
    assert_eq!(porder(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(porder(&["poisson", "core", "--input", DM]).status.code(), Some(2));
    let bad = porder(&["poisson", "core", "--input", DM, "--point", "1,1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(json(&bad)["error"]["code"].is_string());
    let missing_c = porder(&["sra", "--group", "z2", "--t", "0", "center", "--degree", "2"]);
    assert_eq!(missing_c.status.code(), Some(1));
    assert_eq!(json(&missing_c)["error"]["code"], "class-parameter");
    assert_eq!(porder(&["--help"]).status.code(), Some(0));
}

#[test]
fn builtin_examples_pass() {
    let out = porder(&["examples", "run-all"]);
    let r = json(&out);
    assert_eq!(r["result"]["pass"], true, "{}", serde_json::to_string_pretty(&r).unwrap());
    assert_eq!(out.status.code(), Some(0));
    let list = json(&porder(&["examples", "list"]));
    assert!(list["result"]["examples"].as_array().unwrap().len() >= 10);
}

#[test]
fn results_independent_of_threads() {
    let cases: [&[&str]; 3] = [
        &["vgamma", "--group", "z2", "strata"],
        &["sra", "--group", "z2", "--t", "0", "--c", "1", "presentation", "--degree", "2"],
        &["weyl", "census", "--system", "B3"],
    ];
    for args in cases {
        let results: Vec<Value> = ["1", "4"]
            .iter()
            .map(|n| {
                let mut a = vec!["--threads", n];
                a.extend_from_slice(args);
                json(&porder(&a))["result"].clone()
            })
            .collect();
        assert_eq!(results[0], results[1], "{args:?}");
    }
}

#[test]
fn markdown_and_csv() {
    let md = porder(&["--format", "md", "weyl", "census", "--type", "A", "--rank", "2"]);
    let text = String::from_utf8(md.stdout).unwrap();
    assert!(text.starts_with("# weyl census"));
    assert!(text.contains("| eigenvalue_one_multiplicity |") || text.contains("| eigenvalue_one_multiplicity"));
    let csv = porder(&["--format", "csv", "weyl", "census", "--type", "B", "--rank", "2"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eigenvalue_one_multiplicity,elements,equal,k,parabolic"));
    assert_eq!(lines.last(), Some("0,2,false,2,1"));
}

#[test]
fn output_file_and_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("dm.json");
    std::fs::write(&input, DM).unwrap();
    let output = dir.path().join("out.json");
    let out = porder(&[
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "poisson",
        "casimirs",
        "--degree-bound",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(r["result"]["casimirs"], serde_json::json!(["1"]));
}

#[test]
fn corrupted_pbw_control_fails() {
    let r = json(&porder(&["sra", "--group", "z2", "--t", "0", "--c", "1", "pbw", "--degree", "3", "--corrupt", "0"]));
    assert_eq!(r["result"]["pass"], false);
    assert_eq!(r["result"]["first_failure"], 2);
}

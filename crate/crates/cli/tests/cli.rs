use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leavitt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn classify_e3_in_char_2() {
    let out = run(&["classify", "--graph", &fixture("e3.json"), "--char", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["lie_solvable"], "yes");
    assert_eq!(v["lie_index"], 3);
    assert_eq!(v["components"][0]["pattern"], "E3");
}

#[test]
fn classify_path_reports_f1() {
    let out = run(&["classify", "--graph", &fixture("f1path.json"), "--char", "0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["lie_solvable"], "no");
    assert_eq!(v["witnesses"][0]["kind"], "F1");
    assert_eq!(v["witnesses"][0]["edges"], serde_json::json!(["e1", "e2"]));
}

#[test]
fn classify_rejects_bad_input() {
    let out = run(&["classify", "--graph", &fixture("empty-graph.json"), "--char", "0"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
    assert_eq!(
        code(&run(&["classify", "--graph", &fixture("e3.json"), "--char", "4"])),
        2
    );
    assert_eq!(
        code(&run(&["classify", "--graph", "/nonexistent.json", "--char", "2"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "classify",
            "--graph",
            &fixture("e3.json"),
            "--char",
            "2",
            "--bogus"
        ])),
        2
    );
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        vec!["classify", "--graph", &fixture("e4flagged.json"), "--char", "3"],
        vec![
            "verify",
            "--graph",
            &fixture("e3.json"),
            "--field",
            "F2",
            "--depth",
            "4",
        ],
        vec!["matrix", "--case", "prop3c-upper", "--samples", "50"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn verify_e4_exact_agrees() {
    let out = run(&[
        "verify",
        "--graph",
        &fixture("e4n2.json"),
        "--field",
        "F3",
        "--mode",
        "exact",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "AGREE");
    assert_eq!(v["probe"]["vanished_at"], 1);
}

#[test]
fn verify_e3_over_q_truncated_is_consistent() {
    let out = run(&[
        "verify",
        "--graph",
        &fixture("e3.json"),
        "--field",
        "Q",
        "--mode",
        "truncated",
        "--weight",
        "8",
        "--depth",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "CONSISTENT");
    assert_eq!(v["probe"]["dims"].as_array().unwrap().len(), 5);
    assert!(v["probe"]["vanished_at"].is_null());
}

#[test]
fn verify_exact_on_cyclic_graph_is_unavailable() {
    let out = run(&[
        "verify",
        "--graph",
        &fixture("e3.json"),
        "--field",
        "Q",
        "--mode",
        "exact",
    ]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_flagged_e4_exact_disagrees_with_the_table() {
    let out = run(&[
        "verify",
        "--graph",
        &fixture("e4flagged.json"),
        "--field",
        "F2",
        "--mode",
        "exact",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["status"], "FAIL");
    assert_eq!(v["predicted_index"], 3);
    assert_eq!(v["probe"]["vanished_at"], 2);
}

#[test]
fn verify_jordan_in_char_2() {
    let out = run(&[
        "verify",
        "--graph",
        &fixture("e4n2.json"),
        "--field",
        "F2",
        "--mode",
        "exact",
        "--structure",
        "jordan",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["status"], "AGREE");
}

#[test]
fn matrix_prop3a_twenty_steps() {
    let out = run(&[
        "matrix", "--case", "prop3a", "--field", "Q", "--a", "1", "--b", "1", "--c", "1", "--steps", "20",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["case"], "prop3a");
    assert_eq!(v["steps_checked"], 20);
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn matrix_prop3a_rational_and_negative_parameters() {
    let out = run(&[
        "matrix", "--case", "prop3a", "--a", "3/5", "--b", "-4/5", "--c", "1", "--steps", "20",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["params"]["b"], "-4/5");
}

#[test]
fn matrix_prop3d_six_steps() {
    let out = run(&["matrix", "--case", "prop3d", "--steps", "6"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["steps_checked"], 6);
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn matrix_remaining_cases_pass() {
    for case in ["prop3b", "prop3c-sharp", "cor-field", "cor-laurent"] {
        let out = run(&["matrix", "--case", case]);
        assert_eq!(code(&out), 0, "{case}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn matrix_parameter_errors() {
    assert_eq!(code(&run(&["matrix", "--case", "prop3b", "--field", "F3"])), 2);
    assert_eq!(code(&run(&["matrix", "--case", "prop3d", "--field", "F2"])), 2);
    assert_eq!(code(&run(&["matrix", "--case", "prop3a", "--n", "2"])), 2);
    assert_eq!(code(&run(&["matrix", "--case", "prop3a", "--c", "0"])), 2);
    assert_eq!(code(&run(&["matrix", "--case", "prop3a", "--a", "x"])), 2);
    assert_eq!(code(&run(&["matrix", "--case", "prop9"])), 2);
}

#[test]
fn eval_examples() {
    let cases = [
        ("e2.json", "c'·c", "v"),
        ("e4n2.json", "e2·e2'", "u - e1·e1'"),
        ("e4flagged.json", "[e1 - e1', u]", "-e1 - e1'"),
    ];
    for (graph, expr, want) in cases {
        let out = run(&[
            "eval",
            "--graph",
            &fixture(graph),
            "--field",
            "Q",
            "--expr",
            expr,
            "--text",
        ]);
        assert_eq!(code(&out), 0);
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim_end(), want);
        let out = run(&["eval", "--graph", &fixture(graph), "--field", "Q", "--expr", expr]);
        assert_eq!(json(&out)["result"], want);
    }
}

#[test]
fn eval_output_reparses() {
    let g = fixture("e4n2.json");
    let first = run(&[
        "eval",
        "--graph",
        &g,
        "--field",
        "F3",
        "--expr",
        "(e1 + e2')(e2 - 2 e1') + {u1, e1'}",
        "--text",
    ]);
    let printed = String::from_utf8(first.stdout).unwrap();
    let second = run(&[
        "eval",
        "--graph",
        &g,
        "--field",
        "F3",
        "--expr",
        printed.trim_end(),
        "--text",
    ]);
    assert_eq!(String::from_utf8(second.stdout).unwrap(), printed);
}

#[test]
fn eval_parse_error_reports_position() {
    let out = run(&[
        "eval",
        "--graph",
        &fixture("e4n2.json"),
        "--field",
        "Q",
        "--expr",
        "e1 + x",
    ]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("byte 5"), "{err}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verdict.json");
    let out = run(&[
        "classify",
        "--graph",
        &fixture("e3.json"),
        "--char",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lie_index"], 3);
}

#[test]
fn text_output_is_key_value_lines() {
    let out = run(&["classify", "--graph", &fixture("e3.json"), "--char", "2", "--text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "lie_index: 3"));
    assert!(text.lines().any(|l| l == "lie_solvable: yes"));
}

#[test]
fn corpus_aggregates_in_file_order() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["e4n2.json", "e3.json", "f1path.json", "e2.json"] {
        fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let out = run(&[
        "corpus",
        "--dir",
        dir.path().to_str().unwrap(),
        "--fields",
        "F2,Q",
        "--depth",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["graphs"], 4);
    assert_eq!(v["fail"], 0);
    let order: Vec<(String, String)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["file"].as_str().unwrap().into(), e["field"].as_str().unwrap().into()))
        .collect();
    let mut sorted = order.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(order, sorted);
    assert_eq!(order.len(), 8);
    assert_eq!(order[0], ("e2.json".to_string(), "F2".to_string()));
}

#[test]
fn corpus_reports_unreadable_graphs() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("empty-graph.json"), dir.path().join("bad.json")).unwrap();
    let out = run(&["corpus", "--dir", dir.path().to_str().unwrap(), "--fields", "F2"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["errors"], 1);
}

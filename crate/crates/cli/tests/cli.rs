use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn nustar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nustar")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn musq_examples() {
    for (expr, seq, smooth) in
        [("z^2 - x*y", [2, 2, 1, 2], false), ("z^2 - x^3", [2, 3, 3, 0], false), ("z", [1, 0, 1, 0], true)]
    {
        let out = nustar(&["musq", expr]);
        assert_eq!(out.status.code(), Some(0), "{expr}");
        let v = json(&out);
        assert_eq!(v["mu_seq"], serde_json::json!(seq), "{expr}");
        assert_eq!(v["smooth"], Value::Bool(smooth));
        for key in ["coord_change", "reduced", "precision_used"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(v["coord_change"].get("matrix").is_some());
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["--seed", "5", "musq", "x^2 + y^2 + z^3"];
    let a = nustar(&args);
    let b = nustar(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let fam = ["--params", "t", "check-family", "z^2 - x*y - t*x^2"];
    assert_eq!(nustar(&fam).stdout, nustar(&fam).stdout);
}

#[test]
fn check_family_modes() {
    let out = nustar(&["--params", "t", "check-family", "--mode", "harness", "z^2 - x*y"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["consistent"], Value::Bool(true));
    assert_eq!(v["decision"], "yes");
    assert_eq!(v["mode"], "harness");

    let out = nustar(&["--params", "t", "check-family", "--mode", "nustar", "z^2 - x*y - t*x^2"]);
    let v = json(&out);
    assert_eq!(v["constant"], Value::Bool(true));
    assert_eq!(v["generic"], v["special"]);

    let out = nustar(&["--params", "t", "check-family", "--mode", "ze", "z^2 - x*y - t*x"]);
    assert_eq!(json(&out)["decision"], "no");
    let out = nustar(&["--params", "t", "check-family", "--mode", "nutze", "z^2 - x*y - t*x^2"]);
    assert_eq!(json(&out)["decision"], "yes");
}

#[test]
fn curve_milnor_numbers() {
    for (expr, mu) in [("y^2 - x^3", 2), ("x^2 - y^2", 1), ("y^3 - x^5", 8), ("y - x^2", 0)] {
        let out = nustar(&["curve-milnor", expr]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["milnor"], mu, "{expr}");
    }
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["musq", "2x"][..],
        &["musq", "z^2 - w"],
        &["musq", "1 + x"],
        &["check-family", "z^2 - x*y"],
        &["--params", "x", "check-family", "z^2 - x*y"],
        &["musq", "0"],
        &["frobnicate"],
    ] {
        let out = nustar(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn exhaustion_exits_three() {
    let out = nustar(&["--max-trials", "0", "musq", "z^2 - x*y"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn text_format() {
    let out = nustar(&["--format", "text", "musq", "z^2 - x*y"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l == "mu_seq: [2,2,1,2]"), "{s}");
}

fn corpus_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn empty_corpus_passes() {
    let f = corpus_file("[]");
    let out = nustar(&["corpus", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["entries"], 0);
}

#[test]
fn wrong_expectation_fails_the_run() {
    let f = corpus_file(
        r#"[
  { "name": "good", "expression": "z^2 - x*y",
    "expected_mu_seq": { "value": [2, 2, 1, 2], "provenance": "derived:hand computation" } },
  { "name": "bad", "expression": "z^2 - x*y",
    "expected_mu_seq": { "value": [2, 2, 1, 3], "provenance": "derived:deliberately wrong" } }
]"#,
    );
    let out = nustar(&["corpus", "--parallel", "2", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!((v["passed"].as_u64(), v["failed"].as_u64()), (Some(1), Some(1)));
    assert_eq!(v["reports"][1]["name"], "bad");
    assert_eq!(v["reports"][1]["passed"], Value::Bool(false));
}

#[test]
fn malformed_corpus_is_an_input_error() {
    let f = corpus_file(r#"[{ "name": "x", "expression": "z" }]"#);
    assert_eq!(nustar(&["corpus", f.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(nustar(&["corpus", "/nonexistent/corpus.json"]).status.code(), Some(2));
}

use std::path::{Path, PathBuf};
use std::process::Command;

use potalg::brace::{examples, BraceFile, Filtration};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    json: Value,
}

fn potalg(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_potalg")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap_or(-1), stdout, json }
}

fn write(dir: &Path, name: &str, v: &impl serde::Serialize) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn table_file(dir: &Path, name: &str, potential: &str) -> PathBuf {
    let r = potalg(&["dim", "--potential", potential, "--table"]);
    assert_eq!(r.code, 0);
    write(dir, name, &r.json["table"])
}

#[test]
fn derive_relations() {
    let r = potalg(&["derive", "--potential", "x^3 + y^3 + cyc(x y x y)"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["relations"], serde_json::json!(["x^2 + 2 y x y", "y^2 + 2 x y x"]));
    let g = potalg(&["derive", "--potential", "x y x y", "--mode", "ginzburg"]);
    assert_eq!(g.json["relations"], serde_json::json!(["2 y x y", "2 x y x"]));
}

#[test]
fn dim_goldens() {
    let r = potalg(&["dim", "--potential", "x^3 + y^3 + cyc(x y x y)"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["total"], 8);
    assert_eq!(r.json["hilbert"], serde_json::json!([1, 2, 2, 2, 1]));
    assert_eq!(r.json["nilpotency_index"], 5);
    for p in ["cyc(x^2 y) + y^4", "cyc(x^2 y) + y^4 + y^5"] {
        let r = potalg(&["dim", "--potential", p, "--oracle"]);
        assert_eq!(r.json["total"], 9, "{p}");
        assert_eq!(r.json["oracle_agrees"], true, "{p}");
    }
}

#[test]
fn dim_extends_once_without_explicit_cap() {
    let r = potalg(&["dim", "--potential", "x^3 + y^3"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["extended"], true);
    assert_eq!(r.json["cap"], 16);
    assert_eq!(r.json["finite"], false);
    let fixed = potalg(&["dim", "--potential", "x^3 + y^3", "--cap", "10"]);
    assert_eq!(fixed.json["extended"], false);
    assert_eq!(fixed.json["cap"], 10);
}

#[test]
fn exit_codes() {
    let r = potalg(&["dim", "--potential", "x^^2"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["kind"], "parse");
    assert!(r.json["error"]["message"].as_str().unwrap().contains("offset 2"));
    assert_eq!(potalg(&["dim", "--potential", "x", "--field", "4"]).code, 2);
    assert_eq!(potalg(&["gb", "--relations", "x^2", "--cap", "4"]).code, 2);
    assert_eq!(potalg(&["gb", "--relations", "x^2, y^2", "--cap", "100"]).code, 3);
    assert_eq!(potalg(&["reproduce", "--theorem", "nope"]).code, 2);
}

#[test]
fn gb_orders() {
    let r = potalg(&["gb", "--relations", "x y + y x, x^2 + y^3", "--cap", "6"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["complete_through"], 6);
    assert_eq!(r.json["leading_words"][0], "x^2");
    let yx = potalg(&["gb", "--potential", "cyc(x^2 y) + y^4", "--order", "yx", "--cap", "8"]);
    assert_eq!(yx.code, 0);
    assert_eq!(yx.json["order"]["greater"], "Y");
}

#[test]
fn canon_reports_representative() {
    let r = potalg(&["canon", "--potential", "x^3 + y^3 + cyc(x y x y) + y^5"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["representative"], "x^3 + y^3 + cyc(xyxy)");
    assert_eq!(r.json["dimension"], 8);
}

#[test]
fn iso_strategies() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = table_file(dir.path(), "r1.json", "cyc(x^2 y) + y^4");
    let r2 = table_file(dir.path(), "r2.json", "cyc(x^2 y) + y^4 + y^5");
    let (a, b) = (r1.to_str().unwrap(), r2.to_str().unwrap());

    let auto = potalg(&["iso", "--a", a, "--b", b]);
    assert_eq!(auto.code, 0);
    assert_eq!(auto.json["status"], "not_isomorphic");
    assert_eq!(potalg(&["iso", "--a", a, "--b", a]).json["status"], "isomorphic");
    assert_eq!(potalg(&["iso", "--a", a, "--b", b, "--strategy", "invariants"]).json["status"], "inconclusive");
    assert_eq!(
        potalg(&["iso", "--a", a, "--b", b, "--strategy", "lift", "--field", "5"]).json["status"],
        "not_isomorphic"
    );
    // the two algebras become isomorphic in characteristic 2
    let f2 = potalg(&["iso", "--a", a, "--b", b, "--strategy", "brute", "--field", "2"]);
    assert_eq!(f2.json["status"], "isomorphic");
    assert_eq!(potalg(&["iso", "--a", a, "--b", b, "--strategy", "brute", "--field", "3"]).code, 3);
    assert_eq!(potalg(&["iso", "--a", a, "--b", b, "--strategy", "lift"]).code, 2);
}

#[test]
fn brace_actions() {
    let dir = tempfile::tempdir().unwrap();
    let z9 = BraceFile::from_parts(&examples::z9(), None, &Filtration::new(9, &[vec![0, 3, 6], vec![0]]).unwrap());
    let path = write(dir.path(), "z9.json", &z9);
    let p = path.to_str().unwrap();

    let check = potalg(&["brace", "check", "--input", p]);
    assert_eq!(check.code, 0);
    assert_eq!(check.json["brace"]["valid"], true);
    assert_eq!(check.json["filtration"]["valid"], true);
    assert_eq!(potalg(&["brace", "graded", "--input", p]).json["valid"], true);
    assert_eq!(potalg(&["brace", "prelie", "--input", p]).json["pre_lie"], true);
    let s = potalg(&["brace", "series", "--input", p, "--series-args", "1,2,4,4"]);
    assert_eq!(s.code, 0);
    assert_eq!(s.json["partial_sums"].as_array().unwrap().len(), 5);
    assert_eq!(potalg(&["brace", "series", "--input", p]).code, 2);
    assert_eq!(potalg(&["brace", "series", "--input", p, "--series-args", "1,2,40,4"]).code, 2);

    let mut broken = z9.clone();
    broken.star[1][1] = 5;
    let bad = write(dir.path(), "bad.json", &broken);
    let r = potalg(&["brace", "check", "--input", bad.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["brace"]["valid"], false);
}

#[test]
fn reproduce_dim8_passes() {
    let r = potalg(&["reproduce", "--theorem", "dim8"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["pass"], true);
}

#[test]
fn output_is_identical_across_thread_counts() {
    for args in [
        &["dim", "--potential", "cyc(x^2 y) + y^4 + y^5", "--table"][..],
        &["canon", "--potential", "x^3 + y^3 + cyc(x y x y) + y^5"][..],
    ] {
        let one = potalg(&[&["--threads", "1"][..], args].concat()).stdout;
        let many = potalg(&[&["--threads", "8"][..], args].concat()).stdout;
        assert_eq!(one, many);
        assert_eq!(many, potalg(args).stdout);
    }
}

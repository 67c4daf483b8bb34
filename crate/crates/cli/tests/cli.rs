use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const G2: &str = r#"{"players": 2, "v": {"1": 10, "2": 10, "1,2": 30}}"#;
const PAIRS: &str = r#"{"players": 3, "v": {"1": 0, "2": 0, "3": 0, "1,2": 2, "1,3": 2, "2,3": 2, "1,2,3": 2}}"#;
const EDGEWORTH: &str = r#"{"utility": "ces", "rho": "1/2", "grid_denominator": 8}"#;

fn epicore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epicore")).args(args).output().unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ok_json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    // canonical: re-serializing the parsed value reproduces the output
    let mut again = serde_json::to_string_pretty(&v).unwrap();
    again.push('\n');
    assert_eq!(again.as_bytes(), out.stdout.as_slice());
    v
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn core_of_g2() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g2.json", G2);
    let v = ok_json(&epicore(&["core", s(&g)]));
    assert_eq!(v["count"], 11);
    let core = v["core"].as_array().unwrap();
    assert_eq!(core.first().unwrap(), &serde_json::json!(["10", "20"]));
    assert_eq!(core.last().unwrap(), &serde_json::json!(["20", "10"]));
}

#[test]
fn verdict_table() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g2.json", G2);
    let rows = [
        ("1", "", "9,21", "acceptable"),
        ("1", "1", "9,21", "unacceptable"),
        ("1", "1", "10,10", "acceptable"),
        ("1", "1,2", "10,10", "unacceptable"),
        ("2", "2", "30,0", "unacceptable"),
    ];
    for (i, known, x, expected) in rows {
        let v = ok_json(&epicore(&["accept", s(&g), "-i", i, "-K", known, "-x", x]));
        assert_eq!(v["verdict"], expected, "{i} {known} {x}");
    }
    let v = ok_json(&epicore(&["accept", s(&g), "-i", "1", "-K", "1", "-x", "9,21"]));
    assert_eq!(v["witness"], serde_json::json!(["10", "0"]));
    assert_eq!(v["coalition"], "1");
}

#[test]
fn proofs_are_written_rechecked_and_tamper_evident() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g2.json", G2);
    let proof = dir.path().join("proof.json");
    let v = ok_json(&epicore(&["prove", s(&g), "-i", "1", "-K", "1", "-x", "9,21", "-o", s(&proof)]));
    assert_eq!(v["checked"], true);
    let v = ok_json(&epicore(&["check", s(&proof)]));
    assert_eq!(v["valid"], true);

    // the comparison leaf claims (10,0) ≥₁ (9,21); make it (8,0)
    let text = fs::read_to_string(&proof).unwrap();
    assert!(text.contains(r#""10","0""#));
    let bad = file(&dir, "bad.json", &text.replacen(r#""10","0""#, r#""8","0""#, 1));
    let out = epicore(&["check", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert!(v["failure"]["reason"].is_string());

    let acceptable = dir.path().join("accept.json");
    let v = ok_json(&epicore(&["prove", s(&g), "-i", "1", "-x", "0,0", "-o", s(&acceptable)]));
    assert_eq!(v["verdict"], "acceptable");
    ok_json(&epicore(&["check", s(&acceptable)]));
}

#[test]
fn verify_profiles() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g2.json", G2);
    let v = ok_json(&epicore(&["verify", s(&g), "--profiles", "covering"]));
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["characterizes_core"] == true));

    let out = dir.path().join("all.json");
    let run = epicore(&["--threads", "2", "verify", s(&g), "--profiles", "all", "-o", s(&out)]);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty());
    let all: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(all.as_array().unwrap().len(), 16);

    let profiles = file(&dir, "profiles.json", r#"[["1", "2"], ["1;1,2", "2"]]"#);
    let v = ok_json(&epicore(&["verify", s(&g), "--profiles", s(&profiles)]));
    assert_eq!(v[0]["characterizes_core"], false);
    assert_eq!(v[0]["violations"][0], serde_json::json!(["10", "10"]));
    assert_eq!(v[1]["characterizes_core"], true);
}

#[test]
fn balanced_and_bondareva_shapley() {
    let dir = TempDir::new().unwrap();
    let v = ok_json(&epicore(&["balanced", "3"]));
    assert_eq!(v["count"], 6);
    let pairs = v["families"].as_array().unwrap().iter().find(|f| f["family"] == "1,2;1,3;2,3").unwrap();
    assert_eq!(pairs["weights"]["1,2"], "1/2");
    assert_eq!(epicore(&["balanced", "5"]).status.code(), Some(3));

    let p = file(&dir, "pairs.json", PAIRS);
    let v = ok_json(&epicore(&["bs", s(&p), "--exhaustive"]));
    assert_eq!(v["nonempty"], false);
    assert_eq!(v["violation"]["weighted_value"], "3");
    assert_eq!(v["balanced_knowledge"]["hypothesis_holds"], false);
    let g = file(&dir, "g2.json", G2);
    let v = ok_json(&epicore(&["bs", s(&g)]));
    assert_eq!(v["nonempty"], true);
    assert_eq!(v["balanced_knowledge"]["implication_holds"], true);
}

#[test]
fn replica_counts_and_cores() {
    let dir = TempDir::new().unwrap();
    let e = file(&dir, "edgeworth.json", EDGEWORTH);
    let out = epicore(&["replica", s(&e), "-k", "3"]);
    let v = ok_json(&out);
    assert_eq!(v["effective_coalitions"]["count"], 20);
    assert_eq!(v["effective_coalitions"]["average"], "10/3");
    assert_eq!(v["grid_core"], Value::Null);
    assert!(v["note"].as_str().unwrap().contains("grid core skipped"));

    let csv = dir.path().join("core.csv");
    let v = ok_json(&epicore(&["replica", s(&e), "-k", "1", "--csv", s(&csv)]));
    let core = v["grid_core"].as_array().unwrap();
    assert!(core.contains(&serde_json::json!([["1/2", "1/2"], ["1/2", "1/2"]])));
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 2 * core.len());
    assert_eq!(v["effective_coalitions"]["count"], 3);
}

#[test]
fn input_errors() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g2.json", G2);
    let missing = file(&dir, "missing.json", r#"{"players": 2, "v": {"1": 10, "1,2": 30}}"#);
    let out = epicore(&["core", s(&missing)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("coalition 2"));

    let broken = file(&dir, "broken.json", "{\"players\": 2,\n  \"v\": {\"1\": 10,,}}");
    let out = epicore(&["core", s(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2 column"), "{}", stderr(&out));

    let out = epicore(&["accept", s(&g), "-i", "1", "-x", "1/3,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("entry 1"));

    let rho = file(&dir, "rho.json", r#"{"utility": "ces", "rho": "1/3", "grid_denominator": 8}"#);
    assert_eq!(epicore(&["replica", s(&rho)]).status.code(), Some(3));
    assert_eq!(epicore(&["core", "/nonexistent/game.json"]).status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g2.json", G2);
    let e = file(&dir, "edgeworth.json", EDGEWORTH);
    for args in [
        vec!["verify", s(&g), "--profiles", "all"],
        vec!["replica", s(&e), "-k", "2"],
        vec!["balanced", "4"],
    ] {
        let a = epicore(&args);
        let b = epicore(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

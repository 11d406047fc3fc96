use doctrina::Report;
use std::process::{Command, Output};
use tempfile::TempDir;

fn doctrina(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doctrina")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> Report {
    Report::from_jsonl(&String::from_utf8_lossy(&out.stdout)).expect("stdout is a report")
}

const CHAIN: &str = r#"{
  "labels": ["x"],
  "domains": {"x": 2},
  "diagrams": {
    "chain": {"inner": ["x","x","x","x"], "junctions": ["x","x","x"], "outer": ["x","x"],
              "f": [0,1,1,2], "g": [0,2]},
    "id": {"inner": ["x","x"], "junctions": ["x","x"], "outer": ["x","x"], "f": [0,1], "g": [0,1]}
  },
  "systems": {
    "R": {"context": ["x","x"], "semantics": "rel", "data": "2"},
    "S": {"context": ["x","x"], "semantics": "rel", "data": "4"},
    "T": {"context": ["x","x"], "semantics": "trop", "data": [0, 1, 2, "inf"]}
  }
}"#;

const PATHS: &str = r#"{
  "labels": ["v"],
  "domains": {"v": 3},
  "k": 3,
  "diagrams": {
    "chain": {"inner": ["v","v","v","v"], "junctions": ["v","v","v"], "outer": ["v","v"],
              "f": [0,1,1,2], "g": [0,2]}
  },
  "systems": {
    "ab": {"context": ["v","v"], "semantics": "trop", "data": ["inf",1,"inf","inf","inf","inf","inf","inf","inf"]},
    "bc": {"context": ["v","v"], "semantics": "trop", "data": ["inf","inf","inf","inf","inf",2,"inf","inf","inf"]}
  }
}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn eval_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("one JSON record")
}

#[test]
fn verify_powerset_passes() {
    let out = doctrina(&["verify", "--fiber", "powerset", "--max-size", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert!(r.passed());
    assert!(r.get("powerset.pdot.laxator.commuter").is_some_and(|c| c.instances > 0));
}

#[test]
fn verify_tropical_passes() {
    let out = doctrina(&["verify", "--fiber", "tropical", "--k", "2", "--max-size", "2"]);
    assert_eq!(code(&out), 0);
    assert!(report(&out).get("tropical.doctrine.frobenius.right").is_some());
}

#[test]
fn injective_right_triple_fails_on_projections() {
    let out = doctrina(&["verify", "--triple", "inj-right", "--fiber", "powerset", "--max-size", "2"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    let c = r.get("triple.projections-right").unwrap();
    assert!(!c.passed());
    assert!(c.witness.as_deref().unwrap().contains("π_A"));
}

#[test]
fn oversized_runs_need_force() {
    let out = doctrina(&["verify", "--max-size", "5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
    assert_eq!(code(&doctrina(&["verify", "--max-size", "0"])), 2);
    assert_eq!(code(&doctrina(&["verify", "--k", "0"])), 2);
    assert_eq!(code(&doctrina(&["verify", "--triple", "/no/such/file.json"])), 2);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let args = ["verify", "--fiber", "both", "--max-size", "1"];
    let one = doctrina(&[&["--jobs", "1"], &args[..]].concat());
    let many = doctrina(&[&["--jobs", "4"], &args[..]].concat());
    let again = Command::new(env!("CARGO_BIN_EXE_doctrina")).args(args).env("DOCTRINA_JOBS", "2").output().unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn summary_and_out_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.jsonl");
    let out = doctrina(&["verify", "--fiber", "powerset", "--max-size", "1", "--summary", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("triple.projections-right"));
    let saved = Report::from_jsonl(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(saved.passed());
}

#[test]
fn roundtrip_runs() {
    assert_eq!(code(&doctrina(&["roundtrip", "--fiber", "powerset", "--max-size", "2"])), 0);
    let trop = doctrina(&["roundtrip", "--fiber", "tropical", "--k", "2", "--max-size", "2"]);
    assert_eq!(code(&trop), 0);
    assert!(report(&trop).get("tropical.roundtrip.frobenius.agreement").is_some_and(|c| c.passed()));
    let broken = doctrina(&["roundtrip", "--fiber", "powerset", "--max-size", "2", "--mutate", "non-functorial-subst"]);
    assert_eq!(code(&broken), 1);
    assert!(!report(&broken).get("powerset.roundtrip.verify").unwrap().passed());
}

#[test]
fn mutations_fail_verify() {
    for m in ["broken-tensor", "swapped-adjoint", "non-functorial-subst"] {
        let out = doctrina(&["verify", "--fiber", "powerset", "--max-size", "2", "--mutate", m]);
        assert_eq!(code(&out), 1, "{m}");
        assert!(report(&out).failed_clauses().all(|c| c.witness.is_some()));
    }
}

#[test]
fn eval_relational_composition() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "chain.json", CHAIN);
    let out = doctrina(&["eval", "--input", &input, "--diagram", "chain", "--system", "R", "--system", "S", "--check"]);
    assert_eq!(code(&out), 0);
    let v = eval_json(&out);
    assert_eq!(v["data"], "1");
    assert_eq!(v["check"], "agree");
    assert_eq!(v["semantics"], "rel");
}

#[test]
fn eval_identity_echoes_input() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "chain.json", CHAIN);
    let rel = eval_json(&doctrina(&["eval", "--input", &input, "--diagram", "id", "--system", "R"]));
    assert_eq!(rel["data"], "2");
    let trop = eval_json(&doctrina(&["eval", "--input", &input, "--diagram", "id", "--system", "T"]));
    assert_eq!(trop["data"], serde_json::json!([0, 1, 2, "inf"]));
}

#[test]
fn eval_tropical_chain() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "paths.json", PATHS);
    let out_path = dir.path().join("out.json");
    let out = doctrina(&[
        "eval", "--input", &input, "--diagram", "chain", "--system", "ab", "--system", "bc", "--check", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let data = v["data"].as_array().unwrap();
    assert_eq!(data[2], 3);
    assert!(data.iter().enumerate().all(|(i, c)| i == 2 || c == "inf"));
    assert_eq!(v["k"], 3);
}

#[test]
fn eval_input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "chain.json", CHAIN);
    let bad = write(&dir, "bad.json", "{\"labels\": [");
    let cases: Vec<Vec<&str>> = vec![
        vec!["eval", "--input", &bad, "--diagram", "chain", "--system", "R"],
        vec!["eval", "--input", &good, "--diagram", "nope", "--system", "R"],
        vec!["eval", "--input", &good, "--diagram", "chain", "--system", "R", "--system", "T"],
        vec!["eval", "--input", &good, "--diagram", "chain", "--system", "R"],
        vec!["eval", "--input", "/no/such/file", "--diagram", "chain", "--system", "R"],
    ];
    for args in cases {
        let out = doctrina(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

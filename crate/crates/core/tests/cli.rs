use std::path::PathBuf;
use std::process::{Command, Output};

fn polyreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyreg")).args(args).output().expect("binary runs")
}

fn write_instance(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polyreg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const SQUARE: &str = r#"{"n":2,"A":[[1,0],[0,1]],"C":{"n":2,"inequalities":[
  {"y":[-1,0],"alpha":0},{"y":[1,0],"alpha":1},{"y":[0,-1],"alpha":0},{"y":[0,1],"alpha":1}]}}"#;
const NEGATIVE: &str = r#"{"n":1,"A":[["-1"]],"C":{"n":1,"inequalities":[{"y":["-1"]}]}}"#;
const ORTHANT3: &str = r#"{"n":3,"A":[[2,0,0],[0,2,0],[0,0,2]],"C":{"n":3,"inequalities":[
  {"y":[-1,0,0]},{"y":[0,-1,0]},{"y":[0,0,-1]}]}}"#;
const BAD_RELATION: &str = r#"{"n":1,"A":[[1]],"C":{"n":1,"inequalities":[{"y":[-1]}]},
  "relation":{"faces":[{"active_set":[],"lambda":{"n":1,"inequalities":[{"y":[1]},{"y":[-1]}]}},
                       {"active_set":[0],"lambda":{"n":1,"inequalities":[{"y":[-1]}]}}]}}"#;

fn path_str(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn faces_counts() {
    let sq = write_instance("square.json", SQUARE);
    let out = polyreg(&["faces", "--file", path_str(&sq)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("9 faces"));
    let orth = write_instance("orthant3.json", ORTHANT3);
    let out = polyreg(&["faces", "--file", path_str(&orth), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["faces"].as_array().unwrap().len(), 8);
}

#[test]
fn check_exit_codes() {
    let sq = write_instance("square.json", SQUARE);
    assert_eq!(polyreg(&["check", "--file", path_str(&sq)]).status.code(), Some(0));
    let neg = write_instance("negative.json", NEGATIVE);
    let out = polyreg(&["check", "--file", path_str(&neg), "--which", "critical", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["critical_face"]["witness"][2], serde_json::json!(["1"]));
    assert_eq!(polyreg(&["check", "--file", "/nonexistent.json"]).status.code(), Some(2));
    let junk = write_instance("junk.json", "{\"n\": 1}");
    assert_eq!(polyreg(&["check", "--file", path_str(&junk)]).status.code(), Some(2));
    assert_eq!(polyreg(&["check"]).status.code(), Some(2));
}

#[test]
fn p_matrix_family_checks_pass() {
    for seed in 0..5 {
        let out = polyreg(&["generate", "--family", "p_matrix", "--n", "3", "--seed", &seed.to_string()]);
        let path = write_instance(&format!("p{seed}.json"), std::str::from_utf8(&out.stdout).unwrap());
        assert_eq!(polyreg(&["check", "--file", path_str(&path)]).status.code(), Some(0), "seed {seed}");
    }
}

#[test]
fn solve_lists_pieces() {
    let neg = write_instance("negative.json", NEGATIVE);
    let out = polyreg(&["solve", "--file", path_str(&neg), "--z", "-1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let pieces = v.as_array().unwrap();
    assert_eq!(pieces.len(), 2);
    assert_eq!(pieces[1]["face_active_set"], serde_json::json!([0]));
    assert_eq!(pieces[1]["witness"], serde_json::json!(["0"]));
    assert_eq!(polyreg(&["solve", "--file", path_str(&neg), "--z", "1,2"]).status.code(), Some(2));
}

#[test]
fn modulus_brackets_scaled_identity() {
    let orth = write_instance("orthant3.json", ORTHANT3);
    let out = polyreg(&["modulus", "--file", path_str(&orth), "--samples", "300", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (lo, hi) = (v["lower"].as_f64().unwrap(), v["upper"].as_f64().unwrap());
    assert!(lo <= 2.0 && 2.0 <= hi && hi - lo < 1e-6, "{lo} {hi}");
    let neg = write_instance("negative.json", NEGATIVE);
    assert_eq!(polyreg(&["modulus", "--file", path_str(&neg), "--samples", "50"]).status.code(), Some(1));
}

#[test]
fn audit_flags_wrong_relation() {
    let bad = write_instance("bad_relation.json", BAD_RELATION);
    let out = polyreg(&["audit", "--file", path_str(&bad), "--samples", "20", "--budget", "100", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["inconsistencies"], serde_json::json!(["coherent_equals_separation"]));
    let neg = write_instance("negative.json", NEGATIVE);
    assert_eq!(polyreg(&["audit", "--file", path_str(&neg), "--samples", "20", "--budget", "100"]).status.code(), Some(0));
}

#[test]
fn orthant_family_audit_is_clean() {
    let out = polyreg(&[
        "audit", "--family", "p_matrix", "--n", "3", "--count", "6", "--samples", "40", "--budget", "200", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["regular"], 6);
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--family", "random_polyhedron", "--n", "3", "--k", "5", "--seed", "7"];
    let (a, b) = (polyreg(&args), polyreg(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(polyreg(&["generate", "--family", "nope"]).status.code(), Some(2));
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_polyreg"))
        .args(["generate"])
        .env("POLYREG_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

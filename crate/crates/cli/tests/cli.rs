use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expnbhd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn ncomplex_of_k3_has_three_facets() {
    let v = json(&["compute", "ncomplex", "--graph", "k3"]);
    assert_eq!(v["facets"].as_array().unwrap().len(), 3);
}

#[test]
fn torus_homology() {
    let v = json(&["compute", "homology", "--exp", "3", "2", "--max-dim", "2"]);
    assert_eq!(v["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(v["method"], "bruteforce");
}

#[test]
fn hom_complex_homology() {
    let v = json(&["compute", "hom", "--g", "k2", "--h", "k3"]);
    assert_eq!(v["betti"], serde_json::json!([1, 1]));
}

#[test]
fn reproduce_small_cases() {
    let v = json(&["reproduce", "--n", "3"]);
    assert_eq!(v["betti"], serde_json::json!([1, 1, 14]));
    assert_eq!(v["facets"], serde_json::json!({"M1": 72, "A1": 36, "A2": 12, "A3": 4}));
    assert_eq!(v["acyclic"], true);
    let v = json(&["reproduce", "--n", "4"]);
    assert_eq!(v["betti"], serde_json::json!([1, 1, 121, 1]));
    let v = json(&["reproduce", "--cor1", "--m", "4", "--n", "6"]);
    assert_eq!(v["betti"], serde_json::json!([1, 0, 1]));
}

#[test]
fn verify_named_checks() {
    for (n, lemma) in [("3", "free-faces"), ("4", "acyclic"), ("4", "paths")] {
        let v = json(&["verify", "--n", n, "--lemma", lemma]);
        let checks = v.as_array().unwrap();
        assert_eq!(checks.len(), 1);
        assert_eq!(checks[0]["name"], lemma);
        assert_eq!(checks[0]["status"], "pass");
    }
}

#[test]
fn csv_output_has_a_header() {
    let out = run(&["--format", "csv", "compute", "homology", "--graph", "k4", "--max-dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "dim,betti,method\n0,1,bruteforce\n1,0,bruteforce\n2,1,bruteforce\n"
    );
    let out = run(&["--format", "csv", "compute", "matching", "--n", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("cell_vertices,matched_cell_vertices\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["reproduce", "--n", "3"]), 0);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["reproduce", "--n", "2"]), 2);
    assert_eq!(code(&["verify", "--n", "3", "--lemma", "nonsense"]), 2);
    assert_eq!(code(&["--threads", "0", "reproduce", "--n", "3"]), 2);
    assert_eq!(code(&["compute", "ncomplex", "--graph", "does-not-exist.json"]), 2);
    assert_eq!(code(&["reproduce", "--n", "7"]), 3);
    assert_eq!(code(&["compute", "exp-graph", "--exp", "9", "9"]), 3);
    assert_eq!(code(&["--face-bound", "100", "reproduce", "--n", "4", "--method", "bruteforce"]), 3);
}

#[test]
fn inconsistent_chain_complex_is_a_mismatch() {
    let dir = std::env::temp_dir().join(format!("expnbhd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chain.json");
    let bad = r#"{"dims":[1,1,1],"boundaries":[{"rows":1,"cols":1,"entries":[[0,0]]},{"rows":1,"cols":1,"entries":[[0,0]]}]}"#;
    std::fs::write(&path, bad).unwrap();
    assert_eq!(code(&["compute", "homology", "--chain", path.to_str().unwrap()]), 1);
    let good = r#"{"dims":[2,1],"boundaries":[{"rows":2,"cols":1,"entries":[[0,0],[1,0]]}]}"#;
    std::fs::write(&path, good).unwrap();
    let v = json(&["compute", "homology", "--chain", path.to_str().unwrap()]);
    assert_eq!(v["betti"], serde_json::json!([1, 0]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_identical_across_runs_and_thread_counts() {
    for args in [
        vec!["reproduce", "--n", "4"],
        vec!["verify", "--n", "3"],
        vec!["--format", "csv", "compute", "matching", "--n", "3"],
        vec!["compute", "morse", "--n", "3"],
    ] {
        let base = run(&args).stdout;
        assert!(!base.is_empty());
        for threads in ["1", "2", "4"] {
            let mut with = vec!["--threads", threads];
            with.extend(&args);
            assert_eq!(run(&with).stdout, base, "{args:?} with {threads} threads");
        }
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gptdarwin")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gptdarwin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn passing_commands_exit_zero() {
    assert_eq!(code(&["theory", "info", "cpt:3"]), 0);
    assert_eq!(code(&["frames", "ngon:5"]), 0);
    assert_eq!(code(&["demo", "theorem1-stm"]), 0);
    assert_eq!(code(&["demo", "--list"]), 0);
    assert_eq!(code(&["check", "composition", "--composite", r#"{"kind":"qt","qubits":2}"#]), 0);
}

#[test]
fn failed_checks_exit_two() {
    assert_eq!(code(&["check", "composition", "--composite", r#"{"kind":"corrupted"}"#]), 2);
    let identity = r#"{"theory":"qt","envs":1,"transformation":"identity"}"#;
    assert_eq!(code(&["check", "darwinism", "--scenario", identity]), 2);
}

#[test]
fn input_errors_exit_three() {
    let missing = scratch("missing.json");
    assert_eq!(code(&["check", "darwinism", "--scenario", missing.to_str().unwrap()]), 3);
    assert_eq!(code(&["demo", "nope"]), 3);
    assert_eq!(code(&["bogus"]), 3);
    assert_eq!(code(&["separability", "--composite", r#"{"kind":"qt","qubits":2}"#, "1,0"]), 3);
    let out = run(&["theory", "info", "ngon:2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn exhausted_budget_exits_four() {
    assert_eq!(code(&["demo", "stm-cswap", "--budget", "2"]), 4);
}

#[test]
fn untimed_reports_are_identical_across_worker_counts() {
    let (a, b) = (scratch("one.json"), scratch("four.json"));
    for (jobs, path) in [("1", &a), ("4", &b)] {
        let status = run(&[
            "--jobs",
            jobs,
            "report",
            "--json",
            path.to_str().unwrap(),
            "--demo",
            "theorem2-qt",
            "--demo",
            "ngon-quasiclassical",
            "--no-timing",
        ])
        .status;
        assert_eq!(status.code(), Some(0));
    }
    let (x, y) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_str(&x).unwrap();
    assert_eq!(v[0]["schema"], "gptdarwin-report/1");
    assert!(v[0]["self_test"].as_array().unwrap().iter().all(|c| c["verified"] == true));
}

mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn slopscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slopscope"))
        .args(args)
        .env_remove("SLOPSCOPE_RULES")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn snapshot(n: &str) -> String {
    common::fixtures().join("history/snapshots").join(n).display().to_string()
}

#[test]
fn scan_json_is_an_envelope() {
    let o = slopscope(&["scan", &snapshot("07")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["payload"]["kind"], "scan");
    assert!(v["created_at"].is_string());
    assert_eq!(v["config_digest"].as_str().unwrap().len(), 64);
    let final_ = common::history_manifest().expected.pop().unwrap();
    let report = &v["payload"]["report"];
    assert!((report["erosion"]["score"].as_f64().unwrap() - final_.erosion).abs() < 1e-12);
    assert!((report["verbosity"]["score"].as_f64().unwrap() - final_.verbosity).abs() < 1e-12);
}

#[test]
fn scan_csv_matches_golden_file() {
    let o = slopscope(&["scan", &snapshot("07"), "--format", "csv", "--deterministic"]);
    assert_eq!(code(&o), 0);
    let golden = std::fs::read_to_string(common::fixtures().join("golden/scan.csv")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn deterministic_scan_is_byte_identical_across_runs_and_threads() {
    let root = snapshot("07");
    let runs: Vec<Vec<u8>> = [None, Some("1"), Some("4"), Some("4")]
        .iter()
        .map(|t| {
            let mut args = vec!["scan", root.as_str(), "--deterministic", "--sweep", "--emit-matches"];
            if let Some(t) = t {
                args.extend(["--threads", t]);
            }
            let o = slopscope(&args);
            assert_eq!(code(&o), 0);
            o.stdout
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    assert!(!String::from_utf8_lossy(&runs[0]).contains("created_at"));
}

#[test]
fn deterministic_history_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    common::build_history_repo(a.path());
    common::build_history_repo(b.path());
    let run = |dir: &Path, threads: &str| {
        let o = slopscope(&[
            "history",
            dir.to_str().unwrap(),
            "--seed",
            "7",
            "--max-commits",
            "4",
            "--deterministic",
            "--threads",
            threads,
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o).replace(&dir.file_name().unwrap().to_string_lossy().into_owned(), "REPO")
    };
    let first = run(a.path(), "1");
    assert_eq!(first, run(a.path(), "4"));
    assert_eq!(first, run(b.path(), "2"));
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["payload"]["report"]["checkpoints"].as_array().unwrap().len(), 4);
}

#[test]
fn history_csv_has_one_row_per_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    common::build_history_repo(dir.path());
    let o = slopscope(&["history", dir.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), slopscope::report::HISTORY_CSV_HEADER.len());
    assert_eq!(lines.count(), 5);
}

#[test]
fn checkpoint_dirs_form_a_trajectory() {
    let o = slopscope(&["history", "--checkpoint-dir", &snapshot("01"), "--checkpoint-dir", &snapshot("07")]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let summary = &v["payload"]["report"]["summary"];
    assert_eq!(summary["n_checkpoints"], 2);
    assert_eq!(summary["rising_erosion"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&slopscope(&[])), 1);
    assert_eq!(code(&slopscope(&["scan"])), 1);
    assert_eq!(code(&slopscope(&["--help"])), 0);
    assert_eq!(code(&slopscope(&["scan", "/definitely/not/here"])), 2);
    let plain = tempfile::tempdir().unwrap();
    assert_eq!(code(&slopscope(&["history", plain.path().to_str().unwrap()])), 2);

    let bad = plain.path().join("bad.yaml");
    std::fs::write(&bad, "rules:\n  - id: x\n    kind: pattern\n    pattern: 'def ('\n").unwrap();
    assert_eq!(code(&slopscope(&["scan", &snapshot("01"), "--rules", bad.to_str().unwrap()])), 3);
    let missing = plain.path().join("missing.yaml");
    assert_eq!(code(&slopscope(&["rules", "list", "--rules", missing.to_str().unwrap()])), 3);
    let clean = common::fixtures().join("clean.py");
    assert_eq!(code(&slopscope(&["rules", "test", "no-such-rule", clean.to_str().unwrap()])), 1);
}

#[test]
fn rules_list_and_test() {
    let o = slopscope(&["rules", "list"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().count() >= 20);

    let sample = common::fixtures().join("rules/identity-list-comprehension.py");
    let o = slopscope(&["rules", "test", "identity-list-comprehension", sample.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|m| m["rule_id"] == "identity-list-comprehension"));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.py");
    std::fs::write(&empty, "").unwrap();
    let o = slopscope(&["rules", "test", "identity-list-comprehension", empty.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
}

#[test]
fn rules_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rules.yaml");
    std::fs::write(
        &path,
        "rules:\n  - id: only-rule\n    languages: [python]\n    kind: regex\n    pattern: 'TODO'\n    category: notes\n    message: todo\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_slopscope"))
        .args(["rules", "list"])
        .env("SLOPSCOPE_RULES", &path)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "only-rule\tnotes\tpython\n");
}

#[test]
fn panel_reports_failed_repositories() {
    let dir = tempfile::tempdir().unwrap();
    let repo = dir.path().join("good");
    common::build_history_repo(&repo);
    let config = dir.path().join("panel.yaml");
    std::fs::write(
        &config,
        "- {repo_path: good, repo_id: good, stars: 40}\n- {repo_path: nowhere, repo_id: gone, stars: 5000}\n",
    )
    .unwrap();
    let o = slopscope(&["panel", config.to_str().unwrap(), "--reference-mean-verbosity", "0.2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let report = &v["payload"]["report"];
    assert_eq!(report["failed_count"], 1);
    assert_eq!(report["failed"][0]["repo_id"], "gone");
    assert_eq!(report["overall"]["n_repos"], 1);
    assert!(report["tiers"]["Hobby"].is_object());

    std::fs::write(&config, "- {repo_path: nowhere, repo_id: gone, stars: 5}\n").unwrap();
    let o = slopscope(&["panel", config.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["payload"]["report"]["failed_count"], 1);
}

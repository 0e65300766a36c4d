//! End-to-end tests of the `netfactor` binary: synth -> factorize -> eval,
//! experiment configs, and the error paths.

use std::path::Path;
use std::process::{Command, Output};

fn netfactor(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netfactor"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn synth_factorize_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    let out = netfactor(
        &["synth", "--n", "20", "--p", "15", "--seed", "7", "--out", "data"],
        root,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(root.join("data/V.mtx").exists());
    assert!(root.join("data/H.mtx").exists());

    let out = netfactor(
        &[
            "factorize",
            "--v", "data/V.mtx",
            "--h1", "data/H.mtx",
            "--variant", "tree",
            "--k", "3",
            "--alpha", "10",
            "--max-iter", "200",
            "--seed", "7",
            "--out", "run",
        ],
        root,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["run/A.mtx", "run/X.mtx", "run/trace.csv"] {
        assert!(root.join(file).exists(), "{file} missing");
    }

    // the emitted trace is non-increasing
    let trace = std::fs::read_to_string(root.join("run/trace.csv")).unwrap();
    let costs: Vec<f64> = trace
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(!costs.is_empty());
    for w in costs.windows(2) {
        assert!(w[1] <= w[0] + 1e-9 * (1.0 + w[0].abs()));
    }

    let out = netfactor(
        &["eval", "--a", "run/A.mtx", "--h1", "data/H.mtx", "--seed", "1"],
        root,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    for metric in ["jaccard", "degree_correlation", "tree_overlap", "max_overlap"] {
        assert!(text.contains(metric), "missing {metric} in:\n{text}");
    }
}

#[test]
fn planted_synth_clustering_eval_beats_nothing_burns() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    let out = netfactor(
        &[
            "synth", "--n", "40", "--p", "30", "--seed", "3", "--planted",
            "--clusters", "3", "--out", "data",
        ],
        root,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(root.join("data/labels.txt").exists());

    let out = netfactor(
        &[
            "factorize",
            "--v", "data/V.mtx",
            "--h1", "data/H.mtx",
            "--variant", "cnmf",
            "--k", "3",
            "--alpha", "1",
            "--max-iter", "200",
            "--seed", "3",
            "--out", "run",
        ],
        root,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = netfactor(
        &[
            "eval",
            "--a", "run/A.mtx",
            "--labels", "data/labels.txt",
            "--cluster-k", "3",
            "--out", "metrics.csv",
        ],
        root,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("clustering_jaccard"), "{text}");
    assert!(root.join("metrics.csv").exists());
}

#[test]
fn eval_prediction_metrics_from_test_file() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    netfactor(
        &["synth", "--n", "15", "--p", "12", "--seed", "9", "--out", "data"],
        root,
    );
    netfactor(
        &[
            "factorize",
            "--v", "data/V.mtx",
            "--h1", "data/H.mtx",
            "--variant", "nnmf",
            "--k", "3",
            "--alpha", "0.1",
            "--max-iter", "150",
            "--seed", "9",
            "--out", "run",
        ],
        root,
    );
    // score the training matrix itself as a smoke prediction target
    let out = netfactor(
        &[
            "eval",
            "--a", "run/A.mtx",
            "--x", "run/X.mtx",
            "--test", "data/V.mtx",
        ],
        root,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("mae,"), "{text}");
    assert!(text.contains("pearson,"), "{text}");
}

#[test]
fn experiment_runs_from_config_and_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    std::fs::write(
        root.join("cfg.json"),
        r#"{"protocol": "degree", "n": 12, "p": 10, "k": 3, "alpha": 0.3,
            "max_iter": 60, "trials": 4, "seed": 5, "out": "exp_a"}"#,
    )
    .unwrap();

    let out = netfactor(&["experiment", "--config", "cfg.json"], root);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_of(&out).contains("degree_correlation"));

    let out = netfactor(&["experiment", "--config", "cfg.json", "--out", "exp_b"], root);
    assert!(out.status.success());

    for file in ["trials.csv", "summary.csv", "summary.txt"] {
        let a = std::fs::read(root.join("exp_a").join(file)).unwrap();
        let b = std::fs::read(root.join("exp_b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs");
    }
}

#[test]
fn missing_input_file_fails_with_path_in_message() {
    let dir = tempfile::tempdir().unwrap();
    let out = netfactor(
        &[
            "factorize",
            "--v", "does_not_exist.mtx",
            "--h1", "also_missing.mtx",
            "--variant", "nnmf",
            "--out", "run",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("does_not_exist.mtx"), "{err}");
}

#[test]
fn unknown_subcommand_and_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = netfactor(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = netfactor(&["synth", "--bogus-flag", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_variant_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    netfactor(
        &["synth", "--n", "6", "--p", "5", "--seed", "1", "--out", "data"],
        root,
    );
    let out = netfactor(
        &[
            "factorize",
            "--v", "data/V.mtx",
            "--h1", "data/H.mtx",
            "--variant", "qnmf",
            "--out", "run",
        ],
        root,
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("qnmf"), "{err}");
}

mod common;

use std::path::Path;
use std::process::Command;

use common::{random_dataset, tiny};
use dap::env::EnvId;
use dap::harness::{
    metrics_csv, read_metrics, run_sweep, save_dataset, ExperimentConfig, SweepAxis, SUMMARY_HEADER,
};
use dap::trainer::{train, AlgoKind};

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> std::path::PathBuf {
    let path = dir.join("base.txt");
    std::fs::write(&path, cfg.to_config_string()).unwrap();
    path
}

fn with_dataset(dir: &Path, algo: AlgoKind, steps: usize, m: usize) -> ExperimentConfig {
    let path = dir.join("target.dapd");
    if !path.exists() {
        save_dataset(&random_dataset(EnvId::PointMass, m, 0), &path).unwrap();
    }
    ExperimentConfig {
        dataset_path: Some(path),
        ..tiny(algo, steps)
    }
}

fn values(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn k_sweep_launches_six_runs_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let base = with_dataset(dir.path(), AlgoKind::DapU, 60, 300);
    let ks = values(&["0", "0.01", "0.05", "0.10", "0.15", "0.20"]);
    let out = dir.path().join("k");
    let summary = run_sweep(&base, SweepAxis::K, &ks, &[0, 1], 2, &out).unwrap();
    assert_eq!(summary.runs.len(), 12);
    assert_eq!(summary.failures(), 0);
    for k in &ks {
        for seed in [0, 1] {
            let run_dir = out.join(format!("k={k}")).join(format!("seed={seed}"));
            let echoed = ExperimentConfig::load(&run_dir.join("config.txt")).unwrap();
            assert_eq!(echoed.robustify_k, k.parse::<f64>().unwrap());
            assert_eq!(echoed.seed, seed);
            assert!(run_dir.join("metrics.csv").exists() && run_dir.join("policy.json").exists());
        }
    }
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(SUMMARY_HEADER));
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn m_sweep_launches_five_runs_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let base = with_dataset(dir.path(), AlgoKind::DapU, 40, 20_000);
    let ms = values(&["1000", "5000", "10000", "15000", "20000"]);
    let summary = run_sweep(&base, SweepAxis::M, &ms, &[3], 1, &dir.path().join("m")).unwrap();
    assert_eq!(summary.runs.len(), 5);
    assert_eq!(summary.failures(), 0);
    let echoed = ExperimentConfig::load(&summary.runs[0].dir.join("config.txt")).unwrap();
    assert_eq!(echoed.dataset_size, Some(1000));
}

#[test]
fn singleton_sweep_matches_the_single_run() {
    let dir = tempfile::tempdir().unwrap();
    let base = with_dataset(dir.path(), AlgoKind::Dap, 200, 300);
    let summary = run_sweep(
        &base,
        SweepAxis::Lambda,
        &values(&["0.1"]),
        &[0],
        1,
        &dir.path().join("s"),
    )
    .unwrap();
    let single = train(&base).unwrap();
    assert_eq!(
        summary.runs[0].result.as_ref().unwrap(),
        single.metrics.last().unwrap()
    );
    let written = read_metrics(&summary.runs[0].dir.join("metrics.csv")).unwrap();
    assert_eq!(metrics_csv(&written), metrics_csv(&single.metrics));
}

#[test]
fn failed_children_are_recorded_and_the_sweep_continues() {
    let dir = tempfile::tempdir().unwrap();
    let base = with_dataset(dir.path(), AlgoKind::DapU, 40, 300);
    // 500 exceeds the 300 records available.
    let summary = run_sweep(
        &base,
        SweepAxis::M,
        &values(&["100", "500"]),
        &[0],
        2,
        &dir.path().join("f"),
    )
    .unwrap();
    assert_eq!(summary.failures(), 1);
    assert!(summary.runs[0].result.is_ok());
    let csv = summary.to_csv();
    assert!(csv.lines().nth(2).unwrap().contains(",failed,"));
    // Values that do not parse are rejected before anything runs.
    assert!(run_sweep(
        &base,
        SweepAxis::Lambda,
        &values(&["abc"]),
        &[0],
        1,
        &dir.path().join("g")
    )
    .is_err());
    assert!(run_sweep(
        &base,
        SweepAxis::Lambda,
        &[],
        &[0],
        1,
        &dir.path().join("h")
    )
    .is_err());
}

#[test]
fn metrics_rows_increase_in_step_and_are_finite() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = with_dataset(dir.path(), AlgoKind::DapU, 300, 300);
    cfg.eval_interval = 70;
    let out = train(&cfg).unwrap();
    let steps: Vec<usize> = out.metrics.iter().map(|m| m.step).collect();
    assert_eq!(steps, vec![70, 140, 210, 280, 300]);
    assert!(out.metrics.iter().all(|m| m.is_finite()));
}

fn dap_bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dap"));
    cmd.env_remove("DAP_LOG_LEVEL");
    cmd
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn cli_collect_train_eval_and_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let data = d.join("data.dapd");
    let mut behaviour = tiny(AlgoKind::SacSource, 200);
    behaviour.eval_interval = 200;
    let behaviour_cfg = d.join("behaviour.txt");
    std::fs::write(&behaviour_cfg, behaviour.to_config_string()).unwrap();
    let stdout = run_ok(
        dap_bin()
            .args([
                "collect",
                "--env",
                "pointmass",
                "--steps",
                "200",
                "--dataset-size",
                "500",
                "--seed",
                "4",
            ])
            .arg("--out")
            .arg(&data)
            .arg("--config")
            .arg(&behaviour_cfg),
    );
    assert!(stdout.contains("500 transitions"));
    let dataset = dap::harness::load_dataset(&data).unwrap();
    assert_eq!(dataset.len(), 500);
    assert_eq!(
        dataset.behavioral_policy_id,
        "pointmass/sac_source/seed=4/steps=200"
    );

    let mut cfg = tiny(AlgoKind::Dap, 150);
    cfg.dataset_path = Some(data.clone());
    let config = write_config(d, &cfg);
    let train_into = |out: &Path| {
        run_ok(
            dap_bin()
                .args(["train", "--algo", "dap_u", "--seed", "2"])
                .arg("--config")
                .arg(&config)
                .arg("--out")
                .arg(out),
        );
    };
    train_into(&d.join("a"));
    train_into(&d.join("b"));
    let a = std::fs::read(d.join("a/metrics.csv")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b/metrics.csv")).unwrap());
    let echoed = ExperimentConfig::load(&d.join("a/config.txt")).unwrap();
    assert_eq!((echoed.algo, echoed.seed), (AlgoKind::DapU, 2));
    assert_eq!(
        echoed.to_config_string(),
        std::fs::read_to_string(d.join("a/config.txt")).unwrap()
    );

    let stdout = run_ok(
        dap_bin()
            .args(["eval", "--episodes", "3", "--seeds", "0,1"])
            .arg("--policy")
            .arg(d.join("a/policy.json")),
    );
    assert!(
        stdout.starts_with("mean=") && stdout.contains("episodes=6"),
        "{stdout}"
    );
}

#[test]
fn cli_sweep_writes_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with_dataset(dir.path(), AlgoKind::Dap, 60, 300);
    let config = write_config(dir.path(), &cfg);
    let out = dir.path().join("sweep");
    let stdout = run_ok(
        dap_bin()
            .args([
                "sweep", "--axis", "lambda", "--values", "0,1", "--seeds", "0", "--jobs", "2",
            ])
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out),
    );
    assert_eq!(
        stdout,
        std::fs::read_to_string(out.join("summary.csv")).unwrap()
    );
    assert_eq!(stdout.lines().count(), 3);
}

#[test]
fn cli_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "sac.learning_rate=0.1\n").unwrap();
    let out = dap_bin()
        .args(["train", "--out"])
        .arg(dir.path().join("o"))
        .arg("--config")
        .arg(&bad)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
    let out = dap_bin()
        .args(["train", "--algo", "nope", "--out", "x"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    // Classifier algorithms need a dataset.
    let out = dap_bin()
        .args(["train", "--algo", "darc", "--out"])
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(!out.status.success());
}

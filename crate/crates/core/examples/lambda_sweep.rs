//! A small λ sweep through the harness, as `dap sweep` runs it.
//!
//! `cargo run --release --example lambda_sweep`

use dap::env::{EnvId, EnvPair};
use dap::harness::{
    collect_dataset, run_sweep, save_dataset, train_behavioral_policy, ExperimentConfig, SweepAxis,
};
use dap::sac::SacConfig;
use dap::trainer::AlgoKind;

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let sac = SacConfig {
        hidden: vec![32, 32],
        batch_size: 32,
        ..SacConfig::default()
    };
    let behaviour = ExperimentConfig {
        total_steps: 3_000,
        eval_interval: 3_000,
        final_eval_episodes: 2,
        sac: sac.clone(),
        ..ExperimentConfig::default()
    };
    let policy = train_behavioral_policy(&behaviour).unwrap();
    let data = dir.path().join("target.dapd");
    save_dataset(
        &collect_dataset(&EnvPair::new(EnvId::PointMass), &policy, 5_000, 0).unwrap(),
        &data,
    )
    .unwrap();

    let base = ExperimentConfig {
        algo: AlgoKind::Dap,
        total_steps: 5_000,
        eval_interval: 5_000,
        final_eval_episodes: 10,
        dataset_path: Some(data),
        sac,
        ..ExperimentConfig::default()
    };
    let values: Vec<String> = ["0", "0.1", "1"].iter().map(|s| s.to_string()).collect();
    let out = dir.path().join("sweep");
    let summary = run_sweep(&base, SweepAxis::Lambda, &values, &[0, 1], 2, &out).unwrap();
    print!("{}", summary.to_csv());
    let metrics = summary
        .runs
        .iter()
        .filter(|r| r.dir.join("metrics.csv").exists())
        .count();
    println!("{metrics} run directories with config.txt, metrics.csv and policy.json");
}

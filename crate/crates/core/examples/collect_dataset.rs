//! Train a behavioral policy in the source domain, roll it in the target
//! domain and round-trip the dataset through the binary format.
//!
//! `cargo run --release --example collect_dataset`

use dap::env::{EnvId, EnvPair};
use dap::harness::{
    collect_dataset, load_dataset, save_dataset, train_behavioral_policy, ExperimentConfig,
};
use dap::sac::SacConfig;

fn main() {
    let config = ExperimentConfig {
        env: EnvId::PointMass,
        total_steps: 5_000,
        eval_interval: 5_000,
        final_eval_episodes: 5,
        sac: SacConfig {
            hidden: vec![32, 32],
            batch_size: 32,
            ..SacConfig::default()
        },
        ..ExperimentConfig::default()
    };
    let policy = train_behavioral_policy(&config).unwrap();
    println!("behavioral policy {}", policy.id());

    let dataset = collect_dataset(&EnvPair::new(EnvId::PointMass), &policy, 1_000, 42).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("target.dapd");
    save_dataset(&dataset, &path).unwrap();
    let bytes = std::fs::metadata(&path).unwrap().len();
    let back = load_dataset(&path).unwrap();
    assert_eq!(back, dataset);
    println!("{} records, {bytes} bytes, round trip exact", back.len());
    for i in 0..3 {
        let (s, a, s2) = back.record(i);
        println!("  s {s:.3?}  a {a:.3?}  s' {s2:.3?}");
    }
}

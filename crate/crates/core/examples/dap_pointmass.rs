//! All five algorithms on the pointmass pair for one seed.
//!
//! `cargo run --release --example dap_pointmass [steps] [seed]`

use dap::classifier::ClassifierConfig;
use dap::env::{EnvId, EnvPair};
use dap::harness::{collect_dataset, train_behavioral_policy, ExperimentConfig};
use dap::sac::SacConfig;
use dap::trainer::{train_with_dataset, AlgoKind};

fn main() {
    let mut args = std::env::args().skip(1);
    let steps: usize = args.next().map_or(30_000, |s| s.parse().expect("steps"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let base = ExperimentConfig {
        env: EnvId::PointMass,
        seed,
        total_steps: steps,
        eval_interval: steps / 3,
        eval_episodes: 5,
        final_eval_episodes: 20,
        sac: SacConfig {
            hidden: vec![32, 32],
            batch_size: 32,
            ..SacConfig::default()
        },
        classifier: ClassifierConfig {
            hidden: vec![16, 16],
            batch_size: 32,
            input_noise_std: 1.0,
            ..ClassifierConfig::default()
        },
        ..ExperimentConfig::default()
    };

    let behaviour = ExperimentConfig {
        total_steps: 10_000,
        eval_interval: 10_000,
        ..base.clone()
    };
    let policy = train_behavioral_policy(&behaviour).unwrap();
    let dataset = collect_dataset(&EnvPair::new(EnvId::PointMass), &policy, 20_000, seed).unwrap();

    println!(
        "{:<11} {:>16} {:>8} {:>8} {:>8}",
        "algo", "target return", "Δr", "σ", "gap"
    );
    for algo in AlgoKind::ALL {
        let config = ExperimentConfig {
            algo,
            ..base.clone()
        };
        let out = train_with_dataset(&config, Some(&dataset)).unwrap();
        let last = out.metrics.last().unwrap();
        println!(
            "{:<11} {:>8.1} ± {:<5.1} {:>8.3} {:>8.3} {:>8.3}",
            algo.as_str(),
            last.eval_return_mean,
            last.eval_return_std,
            last.delta_r_mean,
            last.sigma_mean,
            last.action_gap_mean
        );
    }
}

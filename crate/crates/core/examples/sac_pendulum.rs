//! Plain SAC on the source pendulum, then the same policy in the heavier target pendulum.
//!
//! `cargo run --release --example sac_pendulum [steps]`

use dap::env::{EnvId, EnvPair};
use dap::harness::ExperimentConfig;
use dap::sac::SacConfig;
use dap::trainer::{evaluate_policy, AlgoKind, Trainer};

fn main() {
    let steps: usize = std::env::args()
        .nth(1)
        .map_or(31_000, |s| s.parse().expect("steps"));
    let config = ExperimentConfig {
        algo: AlgoKind::SacSource,
        env: EnvId::Pendulum,
        total_steps: steps,
        eval_interval: 5_000,
        eval_episodes: 5,
        final_eval_episodes: 10,
        sac: SacConfig {
            hidden: vec![64, 64],
            batch_size: 64,
            ..SacConfig::default()
        },
        ..ExperimentConfig::default()
    };
    let out = Trainer::new(&config, None).unwrap().run().unwrap();
    for row in &out.metrics {
        println!(
            "step {:>6}  target return {:>9.2}  alpha {:.3}",
            row.step, row.eval_return_mean, row.alpha
        );
    }
    let pair = EnvPair::new(EnvId::Pendulum);
    let src = evaluate_policy(&out.snapshot, &pair.source, 10, &[0, 1, 2]);
    let tgt = evaluate_policy(&out.snapshot, &pair.target, 10, &[0, 1, 2]);
    println!(
        "source {:.1} ± {:.1}, target {:.1} ± {:.1}",
        src.mean, src.std, tgt.mean, tgt.std
    );
}

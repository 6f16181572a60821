#![allow(dead_code)]

use dap::classifier::ClassifierConfig;
use dap::env::{EnvId, EnvPair};
use dap::harness::{ExperimentConfig, TargetDataset};
use dap::rng::{self, Stream};
use dap::sac::SacConfig;
use dap::trainer::AlgoKind;
use rand::Rng;

/// Target transitions under uniformly random actions.
pub fn random_dataset(env: EnvId, m: usize, seed: u64) -> TargetDataset {
    let pair = EnvPair::new(env);
    let spec = pair.target.spec().clone();
    let mut r = rng::stream(seed, Stream::Collect);
    let mut d = TargetDataset::new(spec.state_dim, spec.action_dim);
    d.env_id = env.as_str().into();
    let mut s = pair.target.reset_with(&mut r);
    for i in 0..m {
        let a: Vec<f64> = spec
            .action_low
            .iter()
            .zip(&spec.action_high)
            .map(|(l, h)| r.random_range(*l..*h))
            .collect();
        let out = pair.target.step_with(&s, &a, &mut r).unwrap();
        d.push(&s, &a, &out.next_state).unwrap();
        s = if (i + 1) % spec.max_episode_steps == 0 {
            pair.target.reset_with(&mut r)
        } else {
            out.next_state
        };
    }
    d
}

pub fn tiny(algo: AlgoKind, steps: usize) -> ExperimentConfig {
    ExperimentConfig {
        algo,
        env: EnvId::PointMass,
        total_steps: steps,
        delta_r_warmup: 50,
        eval_interval: steps / 2,
        eval_episodes: 2,
        final_eval_episodes: 2,
        eval_seeds: vec![0],
        sac: SacConfig {
            hidden: vec![16],
            batch_size: 16,
            warmup_steps: 100,
            ..SacConfig::default()
        },
        classifier: ClassifierConfig {
            n_ensemble: 3,
            hidden: vec![8],
            batch_size: 16,
            ..ClassifierConfig::default()
        },
        ..ExperimentConfig::default()
    }
}

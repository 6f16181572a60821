//! Classifier-estimated reward adjustment against the analytic log-density ratio.
//!
//! With Gaussian transition noise both domains have closed-form densities, so
//! `log p_target(s'|s,a) − log p_source(s'|s,a)` can be compared to the
//! ensemble estimate directly.
//!
//! `cargo run --release --example delta_r_oracle`

use dap::classifier::{ClassifierConfig, ClassifierEnsemble, FeatureNormalizer, SasBatch};
use dap::env::{Env, EnvId, EnvPair};
use dap::nn::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rollouts(env: &Env, n: usize, rng: &mut ChaCha8Rng) -> SasBatch {
    let horizon = env.spec().max_episode_steps;
    let (mut obs, mut act, mut next) = (Vec::new(), Vec::new(), Vec::new());
    let mut s = env.reset_with(rng);
    for i in 0..n {
        let a = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let s2 = env.step_with(&s, &a, rng).unwrap().next_state;
        obs.extend_from_slice(&s);
        act.extend_from_slice(&a);
        next.extend_from_slice(&s2);
        s = if (i + 1) % horizon == 0 {
            env.reset_with(rng)
        } else {
            s2
        };
    }
    SasBatch {
        obs: Matrix::from_vec(n, 4, obs),
        actions: Matrix::from_vec(n, 2, act),
        next_obs: Matrix::from_vec(n, 4, next),
    }
}

fn rows(b: &SasBatch, idx: &[usize]) -> SasBatch {
    let pick = |m: &Matrix| {
        let data = idx.iter().flat_map(|&i| m.row(i).to_vec()).collect();
        Matrix::from_vec(idx.len(), m.cols(), data)
    };
    SasBatch {
        obs: pick(&b.obs),
        actions: pick(&b.actions),
        next_obs: pick(&b.next_obs),
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pair = EnvPair::new(EnvId::PointMass).with_transition_noise(0.01);
    let n = 20_000;
    let src = rollouts(&pair.source, n, &mut rng);
    let tgt = rollouts(&pair.target, n, &mut rng);
    let mut ensemble = ClassifierEnsemble::new(
        4,
        2,
        FeatureNormalizer::fit(&tgt.features()),
        ClassifierConfig::default(),
        &mut rng,
    )
    .unwrap();
    for step in 0..6_000 {
        let i: Vec<usize> = (0..64).map(|_| rng.random_range(0..n)).collect();
        let j: Vec<usize> = (0..64).map(|_| rng.random_range(0..n)).collect();
        let loss = ensemble
            .train_step(&rows(&src, &i), &rows(&tgt, &j), &mut rng)
            .unwrap();
        if step % 1_000 == 0 {
            println!("step {step:>5}  cross-entropy {loss:.4}");
        }
    }

    println!("{:>10} {:>10} {:>8}  domain", "analytic", "estimate", "σ");
    for (name, env) in [("source", &pair.source), ("target", &pair.target)] {
        let probes = rollouts(env, 5, &mut rng);
        for (i, est) in ensemble.delta_r_batch(&probes).iter().enumerate() {
            let (s, a, s2) = (
                probes.obs.row(i),
                probes.actions.row(i),
                probes.next_obs.row(i),
            );
            let truth = pair.target.transition_log_density(s, a, s2)
                - pair.source.transition_log_density(s, a, s2);
            println!("{truth:>10.2} {:>10.2} {:>8.3}  {name}", est.mean, est.std);
        }
    }
}

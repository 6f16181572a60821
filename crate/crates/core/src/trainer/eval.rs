use std::path::Path;

use serde::{Deserialize, Serialize};

use super::AlgoKind;
use crate::env::{Env, EnvId};
use crate::nn::Matrix;
use crate::rng::{self, Stream};
use crate::sac::{ActionMode, GaussianPolicy};

/// A trained (or in-training) policy plus what is needed to deploy it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySnapshot {
    pub env: EnvId,
    pub algo: AlgoKind,
    pub seed: u64,
    pub trained_steps: usize,
    pub policy: GaussianPolicy,
}

impl PolicySnapshot {
    pub fn is_dual(&self) -> bool {
        self.algo.is_dual()
    }

    pub fn id(&self) -> String {
        format!(
            "{}/{}/seed={}/steps={}",
            self.env, self.algo, self.seed, self.trained_steps
        )
    }

    /// Width of the action the environment receives.
    pub fn env_action_dim(&self) -> usize {
        if self.is_dual() {
            self.policy.action_dim() / 2
        } else {
            self.policy.action_dim()
        }
    }

    /// Environment-facing actions. A dual policy deploys only its `a_tgt` half.
    pub fn deploy_actions<R: rand::Rng + ?Sized>(
        &self,
        obs: &Matrix,
        mode: ActionMode,
        rng: &mut R,
    ) -> Matrix {
        let full = self.policy.act_batch(obs, mode, rng);
        if self.is_dual() {
            let a = self.env_action_dim();
            full.columns(a, 2 * a)
        } else {
            full
        }
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string(self).map_err(std::io::Error::other)?;
        std::fs::write(path, json)
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub mean: f64,
    pub std: f64,
    pub returns: Vec<f64>,
}

/// Deterministic rollouts: `n_episodes` per seed, full horizon each, returns
/// undiscounted. Initial states for seed `s` come from the evaluation stream
/// of `s`, so they are shared by every policy evaluated with the same seeds.
pub fn evaluate_policy(
    snapshot: &PolicySnapshot,
    env: &Env,
    n_episodes: usize,
    seeds: &[u64],
) -> EvalResult {
    assert!(
        n_episodes > 0 && !seeds.is_empty(),
        "need at least one episode"
    );
    assert_eq!(
        snapshot.env_action_dim(),
        env.spec().action_dim,
        "policy and environment action widths differ"
    );
    let horizon = env.spec().max_episode_steps;
    let mut returns = Vec::with_capacity(n_episodes * seeds.len());
    for &seed in seeds {
        let mut rng = rng::stream(seed, Stream::Eval);
        let mut states: Vec<Vec<f64>> = (0..n_episodes).map(|_| env.reset_with(&mut rng)).collect();
        let mut totals = vec![0.0; n_episodes];
        for _ in 0..horizon {
            let obs_dim = env.spec().obs_dim;
            let mut obs = Matrix::zeros(n_episodes, obs_dim);
            for (i, s) in states.iter().enumerate() {
                obs.row_mut(i).copy_from_slice(&env.observe(s));
            }
            let actions = snapshot.deploy_actions(&obs, ActionMode::Deterministic, &mut rng);
            for (i, state) in states.iter_mut().enumerate() {
                let result = env
                    .step_with(state, actions.row(i), &mut rng)
                    .expect("policy actions and states are finite");
                totals[i] += result.reward;
                *state = result.next_state;
            }
        }
        returns.extend(totals);
    }
    let (mean, std) = mean_std(&returns);
    EvalResult { mean, std, returns }
}

/// Mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::buffer::TransitionBatch;
use super::policy::GaussianPolicy;
use crate::nn::{Activation, Adam, AdamConfig, Matrix, Mlp, NnError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SacError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error("non-finite {which} loss ({value}) in SAC update")]
    NonFiniteLoss { which: &'static str, value: f64 },
    #[error("empty batch passed to SAC update")]
    EmptyBatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SacConfig {
    pub hidden: Vec<usize>,
    pub lr: f64,
    pub batch_size: usize,
    /// Weight of the online network in the target update
    /// `target ← polyak·online + (1 − polyak)·target`.
    pub polyak: f64,
    pub gamma: f64,
    pub warmup_steps: usize,
    pub buffer_capacity: usize,
    pub init_alpha: f64,
    /// `None` means `−(policy output width)`.
    pub target_entropy: Option<f64>,
}

impl Default for SacConfig {
    fn default() -> Self {
        Self {
            hidden: vec![256, 256],
            lr: 3e-4,
            batch_size: 256,
            polyak: 0.005,
            gamma: 0.99,
            warmup_steps: 1000,
            buffer_capacity: 1_000_000,
            init_alpha: 1.0,
            target_entropy: None,
        }
    }
}

/// Two online Q networks over `obs ⊕ action` and their slowly tracking copies.
#[derive(Debug, Clone, PartialEq)]
pub struct TwinCritic {
    pub q1: Mlp,
    pub q2: Mlp,
    pub q1_targ: Mlp,
    pub q2_targ: Mlp,
    pub polyak: f64,
}

impl TwinCritic {
    pub fn new<R: Rng + ?Sized>(
        input_dim: usize,
        hidden: &[usize],
        polyak: f64,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        if !(polyak > 0.0 && polyak <= 1.0) {
            return Err(NnError::Config(format!(
                "polyak must lie in (0, 1], got {polyak}"
            )));
        }
        let mut sizes = vec![input_dim];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let q1 = Mlp::new(&sizes, Activation::Relu, rng)?;
        let q2 = Mlp::new(&sizes, Activation::Relu, rng)?;
        Ok(Self {
            q1_targ: q1.clone(),
            q2_targ: q2.clone(),
            q1,
            q2,
            polyak,
        })
    }

    pub fn soft_update(&mut self) {
        self.q1_targ.soft_update_from(&self.q1, self.polyak);
        self.q2_targ.soft_update_from(&self.q2, self.polyak);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyTemperature {
    pub log_alpha: f64,
    pub target_entropy: f64,
}

impl EntropyTemperature {
    pub fn alpha(&self) -> f64 {
        self.log_alpha.exp()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SacLosses {
    pub critic: f64,
    pub actor: f64,
    pub alpha: f64,
}

/// Soft actor-critic learner with automatic temperature tuning.
#[derive(Debug, Clone)]
pub struct SacAgent {
    config: SacConfig,
    pub policy: GaussianPolicy,
    pub critic: TwinCritic,
    pub temperature: EntropyTemperature,
    policy_opt: Adam,
    q1_opt: Adam,
    q2_opt: Adam,
    alpha_opt: Adam,
}

impl SacAgent {
    pub fn new<R: Rng + ?Sized>(
        obs_dim: usize,
        action_low: Vec<f64>,
        action_high: Vec<f64>,
        config: SacConfig,
        rng: &mut R,
    ) -> Result<Self, SacError> {
        if config.batch_size == 0 {
            return Err(NnError::Config("batch_size must be positive".into()).into());
        }
        if !(config.init_alpha > 0.0) {
            return Err(NnError::Config("init_alpha must be positive".into()).into());
        }
        let action_dim = action_low.len();
        let policy = GaussianPolicy::new(obs_dim, &config.hidden, action_low, action_high, rng)?;
        let critic = TwinCritic::new(obs_dim + action_dim, &config.hidden, config.polyak, rng)?;
        let adam = AdamConfig::with_lr(config.lr);
        let temperature = EntropyTemperature {
            log_alpha: config.init_alpha.ln(),
            target_entropy: config.target_entropy.unwrap_or(-(action_dim as f64)),
        };
        Ok(Self {
            policy_opt: Adam::new(policy.net().num_params(), adam)?,
            q1_opt: Adam::new(critic.q1.num_params(), adam)?,
            q2_opt: Adam::new(critic.q2.num_params(), adam)?,
            alpha_opt: Adam::new(1, adam)?,
            policy,
            critic,
            temperature,
            config,
        })
    }

    pub fn config(&self) -> &SacConfig {
        &self.config
    }

    pub fn action_dim(&self) -> usize {
        self.policy.action_dim()
    }

    /// Soft Bellman targets `r + γ(1 − done)(min Q̄(s', a') − α log π(a'|s'))`
    /// with `a' ~ π(·|s')` drawn from `rng`.
    pub fn td_targets<R: Rng + ?Sized>(&self, batch: &TransitionBatch, rng: &mut R) -> Vec<f64> {
        let next = self.policy.sample(&batch.next_obs, rng);
        let input = Matrix::hcat(&batch.next_obs, &next.actions);
        let q1 = self.critic.q1_targ.forward_batch(&input);
        let q2 = self.critic.q2_targ.forward_batch(&input);
        let alpha = self.temperature.alpha();
        let gamma = self.config.gamma;
        (0..batch.len())
            .map(|i| {
                let soft_v =
                    q1.output().get(i, 0).min(q2.output().get(i, 0)) - alpha * next.log_probs[i];
                let mask = if batch.dones[i] { 0.0 } else { 1.0 };
                batch.rewards[i] + gamma * mask * soft_v
            })
            .collect()
    }

    /// One gradient step on both critics, the actor and the temperature,
    /// followed by a soft update of the target critics.
    pub fn update<R: Rng + ?Sized>(
        &mut self,
        batch: &TransitionBatch,
        rng: &mut R,
    ) -> Result<SacLosses, SacError> {
        if batch.is_empty() {
            return Err(SacError::EmptyBatch);
        }
        let n = batch.len();
        let inv_n = 1.0 / n as f64;

        // Critics.
        let targets = self.td_targets(batch, rng);
        let input = Matrix::hcat(&batch.obs, &batch.actions);
        let mut critic_loss = 0.0;
        for (net, opt) in [
            (&mut self.critic.q1, &mut self.q1_opt),
            (&mut self.critic.q2, &mut self.q2_opt),
        ] {
            let tape = net.forward_batch(&input);
            let mut d_out = Matrix::zeros(n, 1);
            for i in 0..n {
                let err = tape.output().get(i, 0) - targets[i];
                critic_loss += err * err * inv_n;
                d_out.set(i, 0, 2.0 * err * inv_n);
            }
            let mut grads = net.zero_grads();
            net.backward_batch(&tape, &d_out, &mut grads);
            opt.step(net.params_mut(), &grads)?;
        }
        check_finite("critic", critic_loss)?;

        // Actor.
        let alpha = self.temperature.alpha();
        let sample = self.policy.sample(&batch.obs, rng);
        let input = Matrix::hcat(&batch.obs, &sample.actions);
        let t1 = self.critic.q1.forward_batch(&input);
        let t2 = self.critic.q2.forward_batch(&input);
        let mut d1 = Matrix::zeros(n, 1);
        let mut d2 = Matrix::zeros(n, 1);
        let mut actor_loss = 0.0;
        for i in 0..n {
            let (v1, v2) = (t1.output().get(i, 0), t2.output().get(i, 0));
            actor_loss += (alpha * sample.log_probs[i] - v1.min(v2)) * inv_n;
            if v1 <= v2 {
                d1.set(i, 0, -inv_n);
            } else {
                d2.set(i, 0, -inv_n);
            }
        }
        check_finite("actor", actor_loss)?;
        // Gradients of the critics are discarded; only the input gradient is used.
        let mut scratch = self.critic.q1.zero_grads();
        let g1 = self.critic.q1.backward_batch(&t1, &d1, &mut scratch);
        let mut scratch = self.critic.q2.zero_grads();
        let g2 = self.critic.q2.backward_batch(&t2, &d2, &mut scratch);
        let obs_dim = batch.obs.cols();
        let a = self.action_dim();
        let mut d_actions = Matrix::zeros(n, a);
        for i in 0..n {
            for j in 0..a {
                d_actions.set(i, j, g1.get(i, obs_dim + j) + g2.get(i, obs_dim + j));
            }
        }
        let d_log_probs = vec![alpha * inv_n; n];
        let mut grads = self.policy.net().zero_grads();
        self.policy
            .backward_sample(&sample, &d_actions, &d_log_probs, &mut grads);
        self.policy_opt
            .step(self.policy.net_mut().params_mut(), &grads)?;

        // Temperature: J(log α) = −log α · mean(log π + target_entropy).
        let mean_term: f64 = sample
            .log_probs
            .iter()
            .map(|lp| lp + self.temperature.target_entropy)
            .sum::<f64>()
            * inv_n;
        let alpha_loss = -self.temperature.log_alpha * mean_term;
        check_finite("alpha", alpha_loss)?;
        let mut log_alpha = [self.temperature.log_alpha];
        self.alpha_opt.step(&mut log_alpha, &[-mean_term])?;
        self.temperature.log_alpha = log_alpha[0];

        self.critic.soft_update();
        Ok(SacLosses {
            critic: critic_loss,
            actor: actor_loss,
            alpha: alpha_loss,
        })
    }
}

fn check_finite(which: &'static str, value: f64) -> Result<(), SacError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(SacError::NonFiniteLoss { which, value })
    }
}

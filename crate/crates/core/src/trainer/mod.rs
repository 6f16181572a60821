//! Training loops: dual action policies with optional uncertainty-based
//! resampling, the single-action classifier-reward baseline, and plain SAC
//! in either domain.
//!
//! Every environment step of a dual-action run does, in order:
//! sample `[a_src, a_tgt]` from the policy; resample `a_src` with noise scaled
//! by the ensemble disagreement at the previous transition; step the source
//! simulator with the resampled action; compute the regularised reward
//! adjustment at `a_tgt`; store the transition; take one SAC step; take one
//! classifier step.

mod eval;

pub use eval::{evaluate_policy, mean_std, EvalResult, PolicySnapshot};

use std::fmt;
use std::str::FromStr;

use log::{debug, info};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{
    ClassifierEnsemble, ClassifierError, DeltaREstimate, FeatureNormalizer, SasBatch,
};
use crate::env::{make_dual, Domain, Env, EnvError, EnvPair};
use crate::harness::config::{ExperimentConfig, LambdaSign, RewardAction, StoredAction};
use crate::harness::dataset::{load_dataset, DatasetError, TargetDataset};
use crate::harness::metrics::MetricsRow;
use crate::nn::Matrix;
use crate::rng::{self, RunRng, Stream};
use crate::robust::{resample_action, ResampleConfig};
use crate::sac::{
    ActionMode, ActionSelect, ReplayBuffer, SacAgent, SacConfig, SacError, SacLosses, Transition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgoKind {
    /// SAC trained in the source domain, deployed in the target domain.
    SacSource,
    /// SAC trained directly in the target domain (reference upper bound).
    SacTarget,
    /// Single-action SAC with the classifier reward adjustment.
    Darc,
    /// Dual action policy without resampling.
    Dap,
    /// Dual action policy with uncertainty-based resampling.
    DapU,
}

impl AlgoKind {
    pub const ALL: [AlgoKind; 5] = [
        AlgoKind::SacSource,
        AlgoKind::SacTarget,
        AlgoKind::Darc,
        AlgoKind::Dap,
        AlgoKind::DapU,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgoKind::SacSource => "sac_source",
            AlgoKind::SacTarget => "sac_target",
            AlgoKind::Darc => "darc",
            AlgoKind::Dap => "dap",
            AlgoKind::DapU => "dap_u",
        }
    }

    pub fn is_dual(self) -> bool {
        matches!(self, AlgoKind::Dap | AlgoKind::DapU)
    }

    pub fn uses_classifiers(self) -> bool {
        matches!(self, AlgoKind::Darc | AlgoKind::Dap | AlgoKind::DapU)
    }

    /// Domain the agent interacts with during training.
    pub fn training_domain(self) -> Domain {
        match self {
            AlgoKind::SacTarget => Domain::Target,
            _ => Domain::Source,
        }
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgoKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgoKind::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                format!(
                    "unknown algorithm `{s}` (expected sac_source, sac_target, darc, dap or dap_u)"
                )
            })
    }
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("target dataset: {0}")]
    Dataset(#[from] DatasetError),
    #[error("step {step}: environment: {source}")]
    Env { step: usize, source: EnvError },
    #[error("step {step}: SAC update: {source}")]
    Sac { step: usize, source: SacError },
    #[error("step {step}: classifier update: {source}")]
    Classifier {
        step: usize,
        source: ClassifierError,
    },
    #[error("step {step}: non-finite {what}")]
    NonFinite { step: usize, what: &'static str },
}

/// `clip(Δr̂) + sign·λ·‖a_src − a_tgt‖²`.
pub fn compute_delta_r_regularized(
    estimate: &DeltaREstimate,
    a_src: &[f64],
    a_tgt: &[f64],
    lambda: f64,
    sign: LambdaSign,
    clip: f64,
) -> f64 {
    assert!(lambda >= 0.0, "lambda must be non-negative");
    assert_eq!(a_src.len(), a_tgt.len(), "action halves differ in length");
    let gap: f64 = a_src
        .iter()
        .zip(a_tgt)
        .map(|(s, t)| (s - t) * (s - t))
        .sum();
    estimate.mean.clamp(-clip, clip) + sign.factor() * lambda * gap
}

/// Everything that happened in one environment step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub episode_step: usize,
    pub state: Vec<f64>,
    pub obs: Vec<f64>,
    /// Source half proposed by the policy (or the warmup sampler).
    pub a_src: Vec<f64>,
    /// Action that drove the simulator.
    pub a_executed: Vec<f64>,
    pub a_tgt: Vec<f64>,
    pub sigma: f64,
    pub task_reward: f64,
    pub delta_r: f64,
    pub stored_reward: f64,
    pub next_state: Vec<f64>,
    pub next_obs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub snapshot: PolicySnapshot,
    pub metrics: Vec<MetricsRow>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    steps: usize,
    delta_r: f64,
    delta_r_exec: f64,
    sigma: f64,
    gap: f64,
    updates: usize,
    losses: SacLosses,
    alpha: f64,
    classifier_updates: usize,
    classifier_loss: f64,
}

/// Target-domain transitions as network features.
#[derive(Debug, Clone)]
struct TargetFeatures {
    obs: Matrix,
    actions: Matrix,
    next_obs: Matrix,
}

impl TargetFeatures {
    fn from_dataset(dataset: &TargetDataset, env: &Env) -> Self {
        let n = dataset.len();
        let o = env.spec().obs_dim;
        let a = dataset.action_dim();
        let mut obs = Matrix::zeros(n, o);
        let mut actions = Matrix::zeros(n, a);
        let mut next_obs = Matrix::zeros(n, o);
        for i in 0..n {
            let (s, act, s2) = dataset.record(i);
            let s: Vec<f64> = s.iter().map(|v| f64::from(*v)).collect();
            let s2: Vec<f64> = s2.iter().map(|v| f64::from(*v)).collect();
            obs.row_mut(i).copy_from_slice(&env.observe(&s));
            next_obs.row_mut(i).copy_from_slice(&env.observe(&s2));
            for (dst, v) in actions.row_mut(i).iter_mut().zip(act) {
                *dst = f64::from(*v);
            }
        }
        Self {
            obs,
            actions,
            next_obs,
        }
    }

    fn len(&self) -> usize {
        self.obs.rows()
    }

    fn gather(&self, idx: &[usize]) -> SasBatch {
        let pick = |m: &Matrix| {
            let mut out = Matrix::zeros(idx.len(), m.cols());
            for (r, &i) in idx.iter().enumerate() {
                out.row_mut(r).copy_from_slice(m.row(i));
            }
            out
        };
        SasBatch {
            obs: pick(&self.obs),
            actions: pick(&self.actions),
            next_obs: pick(&self.next_obs),
        }
    }

    fn all(&self) -> SasBatch {
        SasBatch {
            obs: self.obs.clone(),
            actions: self.actions.clone(),
            next_obs: self.next_obs.clone(),
        }
    }
}

struct Streams {
    env: RunRng,
    policy: RunRng,
    dual: RunRng,
    resample: RunRng,
    sac: RunRng,
    classifier: RunRng,
}

/// One training run, advanced an environment step at a time.
pub struct Trainer {
    config: ExperimentConfig,
    pair: EnvPair,
    agent: SacAgent,
    ensemble: Option<ClassifierEnsemble>,
    target_data: Option<TargetFeatures>,
    buffer: ReplayBuffer,
    resample: ResampleConfig,
    streams: Streams,
    step: usize,
    episode_step: usize,
    state: Vec<f64>,
    obs: Vec<f64>,
    previous: Option<(Vec<f64>, Vec<f64>, Vec<f64>)>,
    acc: Accumulator,
    metrics: Vec<MetricsRow>,
}

impl Trainer {
    /// Builds a run. Classifier-based algorithms need `dataset`.
    pub fn new(
        config: &ExperimentConfig,
        dataset: Option<&TargetDataset>,
    ) -> Result<Self, TrainError> {
        let mut check = config.clone();
        if check.dataset_path.is_none() && dataset.is_some() {
            // The caller supplied the data directly.
            check.dataset_path = Some("<in-memory>".into());
        }
        check
            .validate()
            .map_err(|e| TrainError::Config(e.to_string()))?;
        let config = config.clone();
        let algo = config.algo;
        let pair = EnvPair::new(config.env).with_transition_noise(config.transition_noise);
        let env = pair.get(algo.training_domain());
        let spec = env.spec().clone();

        let (target_data, normalizer) = if algo.uses_classifiers() {
            let dataset = dataset.ok_or_else(|| {
                TrainError::Config("this algorithm needs a target dataset".into())
            })?;
            if dataset.state_dim() != spec.state_dim || dataset.action_dim() != spec.action_dim {
                return Err(TrainError::Config(format!(
                    "dataset dims ({}, {}) do not match environment `{}` ({}, {})",
                    dataset.state_dim(),
                    dataset.action_dim(),
                    spec.id,
                    spec.state_dim,
                    spec.action_dim
                )));
            }
            if !dataset.env_id.is_empty() && dataset.env_id != spec.id.as_str() {
                return Err(TrainError::Config(format!(
                    "dataset was collected in `{}`, run uses `{}`",
                    dataset.env_id, spec.id
                )));
            }
            let dataset = match config.dataset_size {
                Some(m) if m > dataset.len() => {
                    return Err(TrainError::Config(format!(
                        "dataset_size {m} exceeds the {} records available",
                        dataset.len()
                    )))
                }
                Some(m) => dataset.truncated(m),
                None => dataset.clone(),
            };
            let features = TargetFeatures::from_dataset(&dataset, &pair.target);
            let normalizer = FeatureNormalizer::fit(&features.all().features());
            (Some(features), Some(normalizer))
        } else {
            (None, None)
        };

        let seed = config.seed;
        let mut sac_rng = rng::stream(seed, Stream::Sac);
        let dual = algo.is_dual();
        let (low, high) = if dual {
            (spec.action_low.repeat(2), spec.action_high.repeat(2))
        } else {
            (spec.action_low.clone(), spec.action_high.clone())
        };
        let sac_config = SacConfig {
            gamma: spec.gamma,
            ..config.sac.clone()
        };
        let agent = SacAgent::new(spec.obs_dim, low, high, sac_config, &mut sac_rng)
            .map_err(|e| TrainError::Config(e.to_string()))?;
        let ensemble = match normalizer {
            Some(normalizer) => {
                let mut init = rng::stream(seed, Stream::ClassifierInit);
                Some(
                    ClassifierEnsemble::new(
                        spec.obs_dim,
                        spec.action_dim,
                        normalizer,
                        config.classifier.clone(),
                        &mut init,
                    )
                    .map_err(|e| TrainError::Config(e.to_string()))?,
                )
            }
            None => None,
        };
        let mut env_rng = rng::stream(seed, Stream::Env);
        let state = env.reset_with(&mut env_rng);
        let obs = env.observe(&state);
        let resample = ResampleConfig::new(
            config.effective_k(),
            spec.action_low.clone(),
            spec.action_high.clone(),
        );
        let capacity = config.sac.buffer_capacity.min(config.total_steps.max(1));
        Ok(Self {
            buffer: ReplayBuffer::new(capacity, spec.obs_dim, spec.action_dim),
            streams: Streams {
                env: env_rng,
                policy: rng::stream(seed, Stream::Policy),
                dual: rng::stream(seed, Stream::DualHalf),
                resample: rng::stream(seed, Stream::Resample),
                sac: sac_rng,
                classifier: rng::stream(seed, Stream::Classifier),
            },
            config,
            pair,
            agent,
            ensemble,
            target_data,
            resample,
            step: 0,
            episode_step: 0,
            state,
            obs,
            previous: None,
            acc: Accumulator::default(),
            metrics: Vec::new(),
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn steps_done(&self) -> usize {
        self.step
    }

    pub fn is_finished(&self) -> bool {
        self.step >= self.config.total_steps
    }

    pub fn agent(&self) -> &SacAgent {
        &self.agent
    }

    pub fn ensemble(&self) -> Option<&ClassifierEnsemble> {
        self.ensemble.as_ref()
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    pub fn metrics(&self) -> &[MetricsRow] {
        &self.metrics
    }

    pub fn pair(&self) -> &EnvPair {
        &self.pair
    }

    fn env(&self) -> &Env {
        self.pair.get(self.config.algo.training_domain())
    }

    pub fn snapshot(&self) -> PolicySnapshot {
        PolicySnapshot {
            env: self.config.env,
            algo: self.config.algo,
            seed: self.config.seed,
            trained_steps: self.step,
            policy: self.agent.policy.clone(),
        }
    }

    fn uniform_action(low: &[f64], high: &[f64], rng: &mut RunRng) -> Vec<f64> {
        low.iter()
            .zip(high)
            .map(|(l, h)| rng.random_range(*l..*h))
            .collect()
    }

    /// Advances the run by one environment step, including the SAC and
    /// classifier updates and, when due, an evaluation.
    pub fn step(&mut self) -> Result<StepRecord, TrainError> {
        let step = self.step;
        let algo = self.config.algo;
        let dual = algo.is_dual();
        let spec = self.env().spec().clone();
        let a_dim = spec.action_dim;

        // Propose [a_src, a_tgt].
        let (a_src, a_tgt) = if step < self.config.sac.warmup_steps {
            let a_src = Self::uniform_action(
                &spec.action_low,
                &spec.action_high,
                &mut self.streams.policy,
            );
            let a_tgt = if dual {
                Self::uniform_action(&spec.action_low, &spec.action_high, &mut self.streams.dual)
            } else {
                a_src.clone()
            };
            (a_src, a_tgt)
        } else {
            let a = self.agent.policy.select_action(
                &self.obs,
                ActionMode::Stochastic,
                &mut self.streams.policy,
            );
            if dual {
                (a[..a_dim].to_vec(), a[a_dim..].to_vec())
            } else {
                (a.clone(), a)
            }
        };

        // Resample the source half using the disagreement at the previous transition.
        let sigma = match (&self.ensemble, dual) {
            (Some(ensemble), true) => ensemble.sigma(
                self.previous
                    .as_ref()
                    .map(|(o, a, o2)| (o.as_slice(), a.as_slice(), o2.as_slice())),
            ),
            _ => 0.0,
        };
        let a_executed = resample_action(&a_src, sigma, &self.resample, &mut self.streams.resample);

        let result = {
            let env = self.pair.get(algo.training_domain());
            let outcome = if dual {
                let mut full = a_executed.clone();
                full.extend_from_slice(&a_tgt);
                make_dual(env).step_with(&self.state, &full, &mut self.streams.env)
            } else {
                env.step_with(&self.state, &a_executed, &mut self.streams.env)
            };
            outcome.map_err(|source| TrainError::Env { step, source })?
        };
        let next_obs = self.env().observe(&result.next_state);

        // Reward adjustment.
        let mut delta_r = 0.0;
        let mut delta_r_exec = 0.0;
        if let Some(ensemble) = &self.ensemble {
            if step >= self.config.delta_r_warmup {
                let clip = self.config.classifier.clip;
                let query = if dual && self.config.reward_action == RewardAction::Target {
                    &a_tgt
                } else {
                    &a_executed
                };
                let mut rows = SasBatch::single(&self.obs, query, &next_obs);
                if dual {
                    rows = SasBatch {
                        obs: Matrix::from_vec(
                            2,
                            self.obs.len(),
                            [self.obs.clone(), self.obs.clone()].concat(),
                        ),
                        actions: Matrix::from_vec(
                            2,
                            a_dim,
                            [query.clone(), a_executed.clone()].concat(),
                        ),
                        next_obs: Matrix::from_vec(
                            2,
                            next_obs.len(),
                            [next_obs.clone(), next_obs.clone()].concat(),
                        ),
                    };
                }
                let estimates = ensemble.delta_r_batch(&rows);
                delta_r = if dual {
                    compute_delta_r_regularized(
                        &estimates[0],
                        &a_src,
                        &a_tgt,
                        self.config.lambda,
                        self.config.lambda_sign,
                        clip,
                    )
                } else {
                    estimates[0].mean.clamp(-clip, clip)
                };
                delta_r_exec = estimates.last().unwrap().mean.clamp(-clip, clip);
            }
        }
        if !delta_r.is_finite() {
            return Err(TrainError::NonFinite {
                step,
                what: "reward adjustment",
            });
        }
        let stored_reward = result.reward + delta_r;
        let stored_src = match self.config.stored_action {
            StoredAction::Executed => a_executed.clone(),
            StoredAction::Proposed => a_src.clone(),
        };
        self.buffer.push(&Transition {
            obs: self.obs.clone(),
            a_src: stored_src,
            a_tgt: a_tgt.clone(),
            reward: stored_reward,
            next_obs: next_obs.clone(),
            done: result.done,
        });

        // SAC update.
        if step >= self.config.sac.warmup_steps {
            let which = if dual {
                ActionSelect::Dual
            } else {
                ActionSelect::Src
            };
            let batch =
                self.buffer
                    .sample(self.config.sac.batch_size, which, &mut self.streams.sac);
            let losses = self
                .agent
                .update(&batch, &mut self.streams.sac)
                .map_err(|source| TrainError::Sac { step, source })?;
            self.acc.updates += 1;
            self.acc.losses.critic += losses.critic;
            self.acc.losses.actor += losses.actor;
            self.acc.losses.alpha += losses.alpha;
            self.acc.alpha += self.agent.temperature.alpha();
        }

        // Classifier update on D_source ∪ D_target.
        if let (Some(ensemble), Some(target)) = (&mut self.ensemble, &self.target_data) {
            let half = self.config.classifier.batch_size / 2;
            let rng = &mut self.streams.classifier;
            let src_idx = self.buffer.sample_indices(half, rng);
            let src = self.buffer.gather(&src_idx, ActionSelect::Src);
            let source = SasBatch {
                obs: src.obs,
                actions: src.actions,
                next_obs: src.next_obs,
            };
            let tgt_idx: Vec<usize> = (0..half)
                .map(|_| rng.random_range(0..target.len()))
                .collect();
            let target_batch = target.gather(&tgt_idx);
            let loss = ensemble
                .train_step(&source, &target_batch, rng)
                .map_err(|source| TrainError::Classifier { step, source })?;
            self.acc.classifier_updates += 1;
            self.acc.classifier_loss += loss;
        }

        let gap = a_src
            .iter()
            .zip(&a_tgt)
            .map(|(s, t)| (s - t) * (s - t))
            .sum::<f64>()
            .sqrt();
        self.acc.steps += 1;
        self.acc.delta_r += delta_r;
        self.acc.delta_r_exec += delta_r_exec;
        self.acc.sigma += sigma;
        self.acc.gap += gap;

        let record = StepRecord {
            step,
            episode_step: self.episode_step,
            state: self.state.clone(),
            obs: self.obs.clone(),
            a_src,
            a_executed,
            a_tgt: a_tgt.clone(),
            sigma,
            task_reward: result.reward,
            delta_r,
            stored_reward,
            next_state: result.next_state.clone(),
            next_obs: next_obs.clone(),
        };

        // Advance the episode.
        self.previous = Some((self.obs.clone(), a_tgt, next_obs.clone()));
        self.state = result.next_state;
        self.obs = next_obs;
        self.episode_step += 1;
        if result.done || self.episode_step >= spec.max_episode_steps {
            self.state = self
                .pair
                .get(algo.training_domain())
                .reset_with(&mut self.streams.env);
            self.obs = self.env().observe(&self.state);
            self.episode_step = 0;
            self.previous = None;
        }
        self.step += 1;

        let last = self.step == self.config.total_steps;
        if self.step.is_multiple_of(self.config.eval_interval) || last {
            self.record_metrics(last)?;
        }
        Ok(record)
    }

    fn record_metrics(&mut self, last: bool) -> Result<(), TrainError> {
        let episodes = if last {
            self.config.final_eval_episodes
        } else {
            self.config.eval_episodes
        };
        let eval = evaluate_policy(
            &self.snapshot(),
            &self.pair.target,
            episodes,
            &self.config.eval_seeds,
        );
        let acc = std::mem::take(&mut self.acc);
        let per = |v: f64, n: usize| if n == 0 { 0.0 } else { v / n as f64 };
        let row = MetricsRow {
            step: self.step,
            eval_return_mean: eval.mean,
            eval_return_std: eval.std,
            delta_r_mean: per(acc.delta_r, acc.steps),
            delta_r_exec_mean: per(acc.delta_r_exec, acc.steps),
            sigma_mean: per(acc.sigma, acc.steps),
            action_gap_mean: per(acc.gap, acc.steps),
            critic_loss: per(acc.losses.critic, acc.updates),
            actor_loss: per(acc.losses.actor, acc.updates),
            alpha_loss: per(acc.losses.alpha, acc.updates),
            alpha: if acc.updates == 0 {
                self.agent.temperature.alpha()
            } else {
                per(acc.alpha, acc.updates)
            },
            classifier_loss: per(acc.classifier_loss, acc.classifier_updates),
        };
        if !row.is_finite() {
            return Err(TrainError::NonFinite {
                step: self.step,
                what: "metrics",
            });
        }
        info!(
            "{} seed={} step={} target_return={:.2}±{:.2} Δr={:.3} σ={:.4} gap={:.3}",
            self.config.algo,
            self.config.seed,
            row.step,
            row.eval_return_mean,
            row.eval_return_std,
            row.delta_r_mean,
            row.sigma_mean,
            row.action_gap_mean
        );
        debug!("{row:?}");
        self.metrics.push(row);
        Ok(())
    }

    /// Runs to `total_steps`, calling `observer` after every step.
    pub fn run_observed(
        mut self,
        mut observer: impl FnMut(&StepRecord),
    ) -> Result<TrainOutput, TrainError> {
        while !self.is_finished() {
            let record = self.step()?;
            observer(&record);
        }
        Ok(TrainOutput {
            snapshot: self.snapshot(),
            metrics: self.metrics,
        })
    }

    pub fn run(self) -> Result<TrainOutput, TrainError> {
        self.run_observed(|_| {})
    }
}

/// Trains with an already loaded dataset (ignored by the plain SAC baselines).
pub fn train_with_dataset(
    config: &ExperimentConfig,
    dataset: Option<&TargetDataset>,
) -> Result<TrainOutput, TrainError> {
    Trainer::new(config, dataset)?.run()
}

/// Trains, loading `dataset_path` when the algorithm needs it.
pub fn train(config: &ExperimentConfig) -> Result<TrainOutput, TrainError> {
    if config.algo.uses_classifiers() {
        let path = config
            .dataset_path
            .as_ref()
            .ok_or_else(|| TrainError::Config("dataset_path is required".into()))?;
        let dataset = load_dataset(path)?;
        train_with_dataset(config, Some(&dataset))
    } else {
        train_with_dataset(config, None)
    }
}

fn expect_algo(config: &ExperimentConfig, allowed: &[AlgoKind]) -> Result<(), TrainError> {
    if allowed.contains(&config.algo) {
        Ok(())
    } else {
        Err(TrainError::Config(format!(
            "algorithm `{}` cannot be run by this entry point",
            config.algo
        )))
    }
}

/// Dual action policy training (`dap`, or `dap_u` with resampling).
pub fn run_dap(config: &ExperimentConfig) -> Result<TrainOutput, TrainError> {
    expect_algo(config, &[AlgoKind::Dap, AlgoKind::DapU])?;
    train(config)
}

/// Single-action training with the classifier reward adjustment.
pub fn run_darc(config: &ExperimentConfig) -> Result<TrainOutput, TrainError> {
    expect_algo(config, &[AlgoKind::Darc])?;
    train(config)
}

/// Plain SAC in the source or the target domain.
pub fn run_sac(config: &ExperimentConfig) -> Result<TrainOutput, TrainError> {
    expect_algo(config, &[AlgoKind::SacSource, AlgoKind::SacTarget])?;
    train(config)
}

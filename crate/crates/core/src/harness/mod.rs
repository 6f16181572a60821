//! Experiment plumbing: configuration, the target dataset file, metrics
//! output, dataset collection and ablation sweeps.

pub mod config;
pub mod dataset;
pub mod metrics;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use log::{error, info};
use thiserror::Error;

use crate::env::{Env, EnvId, EnvPair};
use crate::nn::Matrix;
use crate::rng::{self, Stream};
use crate::sac::ActionMode;
use crate::trainer::{self, AlgoKind, PolicySnapshot, TrainError, TrainOutput};

pub use config::{ConfigError, ExperimentConfig, LambdaSign, RewardAction, StoredAction};
pub use dataset::{load_dataset, save_dataset, DatasetError, TargetDataset};
pub use metrics::{metrics_csv, read_metrics, write_metrics, MetricsRow, METRICS_HEADER};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error("behavioral policy `{0}` has not been trained")]
    UntrainedPolicy(String),
    #[error("policy acts in `{policy}` but the dataset is for `{env}`")]
    EnvMismatch { policy: EnvId, env: EnvId },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Trains the behavioral policy: plain SAC in the source domain.
pub fn train_behavioral_policy(config: &ExperimentConfig) -> Result<PolicySnapshot, HarnessError> {
    let mut config = config.clone();
    config.algo = AlgoKind::SacSource;
    config.dataset_path = None;
    config.dataset_size = None;
    Ok(trainer::train(&config)?.snapshot)
}

/// Rolls `policy` with stochastic actions in the target environment for
/// exactly `m` transitions, concatenating episodes.
pub fn collect_dataset(
    pair: &EnvPair,
    policy: &PolicySnapshot,
    m: usize,
    seed: u64,
) -> Result<TargetDataset, HarnessError> {
    if policy.trained_steps == 0 {
        return Err(HarnessError::UntrainedPolicy(policy.id()));
    }
    if policy.env != pair.id() {
        return Err(HarnessError::EnvMismatch {
            policy: policy.env,
            env: pair.id(),
        });
    }
    if m == 0 {
        return Err(HarnessError::Invalid(
            "dataset size must be at least 1".into(),
        ));
    }
    let env = &pair.target;
    let spec = env.spec();
    let mut rng = rng::stream(seed, Stream::Collect);
    let mut dataset = TargetDataset::new(spec.state_dim, spec.action_dim);
    dataset.env_id = spec.id.as_str().to_string();
    dataset.behavioral_policy_id = policy.id();
    dataset.collection_seed = seed;
    let mut state = env.reset_with(&mut rng);
    let mut t = 0;
    while dataset.len() < m {
        let obs = Matrix::from_row(&env.observe(&state));
        let action = policy.deploy_actions(&obs, ActionMode::Stochastic, &mut rng);
        let result = env
            .step_with(&state, action.row(0), &mut rng)
            .map_err(|e| HarnessError::Invalid(e.to_string()))?;
        dataset.push(&state, &env.clamp_action(action.row(0)), &result.next_state)?;
        state = result.next_state;
        t += 1;
        if result.done || t >= spec.max_episode_steps {
            state = env.reset_with(&mut rng);
            t = 0;
        }
    }
    Ok(dataset)
}

/// Writes `config.txt`, `metrics.csv` and `policy.json` into `dir`.
pub fn write_run_dir(
    dir: &Path,
    config: &ExperimentConfig,
    output: &TrainOutput,
) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let config_path = dir.join("config.txt");
    std::fs::write(&config_path, config.to_config_string()).map_err(io_err(&config_path))?;
    let metrics_path = dir.join("metrics.csv");
    write_metrics(&output.metrics, &metrics_path).map_err(io_err(&metrics_path))?;
    let policy_path = dir.join("policy.json");
    output
        .snapshot
        .save(&policy_path)
        .map_err(io_err(&policy_path))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Lambda,
    K,
    M,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::K => "k",
            SweepAxis::M => "M",
        }
    }

    /// Config key the axis writes.
    pub fn config_key(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::K => "robustify.k",
            SweepAxis::M => "dataset_size",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lambda" => Ok(SweepAxis::Lambda),
            "k" => Ok(SweepAxis::K),
            "M" | "m" => Ok(SweepAxis::M),
            other => Err(format!(
                "unknown sweep axis `{other}` (expected lambda, k or M)"
            )),
        }
    }
}

/// Outcome of one child run of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub value: String,
    pub seed: u64,
    pub dir: PathBuf,
    pub result: Result<MetricsRow, String>,
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub axis: SweepAxis,
    pub runs: Vec<SweepRun>,
}

pub const SUMMARY_HEADER: &str = "axis,value,seed,status,step,eval_return_mean,eval_return_std,delta_r_mean,sigma_mean,action_gap_mean,error";

impl SweepSummary {
    pub fn failures(&self) -> usize {
        self.runs.iter().filter(|r| r.result.is_err()).count()
    }

    /// One row per child run, failed runs included.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(SUMMARY_HEADER);
        s.push('\n');
        for run in &self.runs {
            let line = match &run.result {
                Ok(m) => format!(
                    "{},{},{},ok,{},{},{},{},{},{},",
                    self.axis,
                    run.value,
                    run.seed,
                    m.step,
                    m.eval_return_mean,
                    m.eval_return_std,
                    m.delta_r_mean,
                    m.sigma_mean,
                    m.action_gap_mean
                ),
                Err(e) => format!(
                    "{},{},{},failed,,,,,,,\"{}\"",
                    self.axis,
                    run.value,
                    run.seed,
                    e.replace('"', "'")
                ),
            };
            s.push_str(&line);
            s.push('\n');
        }
        s
    }
}

/// Runs `base` once per `(value, seed)`, at most `jobs` runs at a time.
/// A failing child run is recorded and the sweep carries on.
pub fn run_sweep(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &[String],
    seeds: &[u64],
    jobs: usize,
    out_dir: &Path,
) -> Result<SweepSummary, HarnessError> {
    if values.is_empty() || seeds.is_empty() {
        return Err(HarnessError::Invalid(
            "a sweep needs at least one value and one seed".into(),
        ));
    }
    let mut jobs_list = Vec::new();
    for value in values {
        let mut config = base.clone();
        config.set(axis.config_key(), value)?;
        for &seed in seeds {
            let mut config = config.clone();
            config.seed = seed;
            let dir = out_dir
                .join(format!("{}={}", axis, value))
                .join(format!("seed={seed}"));
            jobs_list.push((value.clone(), seed, dir, config));
        }
    }
    let dataset = match (&base.dataset_path, base.algo.uses_classifiers()) {
        (Some(path), true) => Some(load_dataset(path)?),
        _ => None,
    };
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<SweepRun>>> = Mutex::new(vec![None; jobs_list.len()]);
    let workers = jobs.clamp(1, jobs_list.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some((value, seed, dir, config)) = jobs_list.get(i) else {
                    break;
                };
                info!("sweep {axis}={value} seed={seed} starting");
                let result = trainer::train_with_dataset(config, dataset.as_ref())
                    .map_err(HarnessError::from)
                    .and_then(|out| {
                        write_run_dir(dir, config, &out)?;
                        Ok(out
                            .metrics
                            .last()
                            .cloned()
                            .expect("a finished run has a final row"))
                    })
                    .map_err(|e| e.to_string());
                if let Err(e) = &result {
                    error!("sweep {axis}={value} seed={seed} failed: {e}");
                }
                results
                    .lock()
                    .expect("no worker panics while holding the lock")[i] = Some(SweepRun {
                    value: value.clone(),
                    seed: *seed,
                    dir: dir.clone(),
                    result,
                });
            });
        }
    });
    let runs = results
        .into_inner()
        .expect("workers have finished")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect();
    let summary = SweepSummary { axis, runs };
    let path = out_dir.join("summary.csv");
    std::fs::write(&path, summary.to_csv()).map_err(io_err(&path))?;
    Ok(summary)
}

/// Evaluates a saved policy in the target environment it was trained for.
pub fn eval_policy_file(
    path: &Path,
    episodes: usize,
    seeds: &[u64],
) -> Result<trainer::EvalResult, HarnessError> {
    let snapshot = PolicySnapshot::load(path).map_err(io_err(path))?;
    if episodes == 0 || seeds.is_empty() {
        return Err(HarnessError::Invalid(
            "need at least one episode and one seed".into(),
        ));
    }
    let env = Env::new(snapshot.env, crate::env::Domain::Target);
    Ok(trainer::evaluate_policy(&snapshot, &env, episodes, seeds))
}

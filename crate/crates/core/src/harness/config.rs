use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::classifier::ClassifierConfig;
use crate::env::EnvId;
use crate::sac::SacConfig;
use crate::trainer::AlgoKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key=value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read config {path}: {message}")]
    Io { path: PathBuf, message: String },
}

/// Sign applied to `λ‖a_src − a_tgt‖²` in the regularised adjustment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSign {
    /// Subtract the gap (penalise diverging action halves).
    Penalty,
    /// Add the gap.
    Literal,
}

impl LambdaSign {
    pub fn factor(self) -> f64 {
        match self {
            LambdaSign::Penalty => -1.0,
            LambdaSign::Literal => 1.0,
        }
    }
}

/// Action at which the dual-action reward adjustment is queried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewardAction {
    /// The predicted target action `a_tgt`.
    Target,
    /// The action actually executed in the simulator.
    Executed,
}

/// Source action written to replay (and therefore seen by the classifiers).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoredAction {
    /// The resampled action that drove the simulator.
    Executed,
    /// The policy's proposal before resampling.
    Proposed,
}

/// Every knob of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algo: AlgoKind,
    pub env: EnvId,
    pub seed: u64,
    pub total_steps: usize,
    pub lambda: f64,
    pub lambda_sign: LambdaSign,
    pub reward_action: RewardAction,
    pub stored_action: StoredAction,
    /// Steps during which the reward adjustment is forced to zero.
    pub delta_r_warmup: usize,
    pub transition_noise: f64,
    pub robustify_k: f64,
    pub dataset_path: Option<PathBuf>,
    /// Use only the first `M` records of the dataset.
    pub dataset_size: Option<usize>,
    pub eval_interval: usize,
    pub eval_episodes: usize,
    pub final_eval_episodes: usize,
    pub eval_seeds: Vec<u64>,
    pub sac: SacConfig,
    pub classifier: ClassifierConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algo: AlgoKind::DapU,
            env: EnvId::PointMass,
            seed: 0,
            total_steps: 100_000,
            lambda: 0.10,
            lambda_sign: LambdaSign::Penalty,
            reward_action: RewardAction::Target,
            stored_action: StoredAction::Executed,
            delta_r_warmup: 2_000,
            transition_noise: 0.0,
            robustify_k: 0.10,
            dataset_path: None,
            dataset_size: None,
            eval_interval: 5_000,
            eval_episodes: 10,
            final_eval_episodes: 100,
            eval_seeds: vec![0, 1, 2],
            sac: SacConfig::default(),
            classifier: ClassifierConfig::default(),
        }
    }
}

const KEYS: &[&str] = &[
    "algo",
    "env",
    "seed",
    "total_steps",
    "lambda",
    "lambda_sign",
    "reward_action",
    "stored_action",
    "delta_r_warmup",
    "transition_noise",
    "dataset_path",
    "dataset_size",
    "eval_interval",
    "eval_episodes",
    "final_eval_episodes",
    "eval_seeds",
    "robustify.k",
    "sac.hidden",
    "sac.lr",
    "sac.batch_size",
    "sac.polyak",
    "sac.warmup_steps",
    "sac.buffer_capacity",
    "sac.init_alpha",
    "classifier.n_ensemble",
    "classifier.hidden",
    "classifier.lr",
    "classifier.input_noise_std",
    "classifier.clip",
    "classifier.batch_size",
];

fn bad(key: &str, value: &str, reason: impl ToString) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| bad(key, value, e))
}

pub fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Defaults overridden by a flat `key=value` file (`#` starts a comment).
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg = Self::parse_unchecked(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Like [`parse`](Self::parse) but skips the cross-key checks, for callers
    /// that override fields before validating.
    pub fn parse_unchecked(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen = std::collections::BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: raw.to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let cfg = Self::load_unchecked(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load_unchecked(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse_unchecked(&text)
    }

    /// Sets one key; unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "algo" => self.algo = value.parse().map_err(|e: String| bad(key, value, e))?,
            "env" => self.env = value.parse().map_err(|e| bad(key, value, e))?,
            "seed" => self.seed = parse_num(key, value)?,
            "total_steps" => self.total_steps = parse_num(key, value)?,
            "lambda" => self.lambda = parse_num(key, value)?,
            "lambda_sign" => {
                self.lambda_sign = match value {
                    "penalty" => LambdaSign::Penalty,
                    "literal" => LambdaSign::Literal,
                    _ => return Err(bad(key, value, "expected `penalty` or `literal`")),
                }
            }
            "reward_action" => {
                self.reward_action = match value {
                    "a_tgt" => RewardAction::Target,
                    "executed" => RewardAction::Executed,
                    _ => return Err(bad(key, value, "expected `a_tgt` or `executed`")),
                }
            }
            "stored_action" => {
                self.stored_action = match value {
                    "executed" => StoredAction::Executed,
                    "proposed" => StoredAction::Proposed,
                    _ => return Err(bad(key, value, "expected `executed` or `proposed`")),
                }
            }
            "delta_r_warmup" => self.delta_r_warmup = parse_num(key, value)?,
            "transition_noise" => self.transition_noise = parse_num(key, value)?,
            "dataset_path" => {
                self.dataset_path = if value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(value))
                }
            }
            "dataset_size" => {
                self.dataset_size = if value.is_empty() || value == "all" {
                    None
                } else {
                    Some(parse_num(key, value)?)
                }
            }
            "eval_interval" => self.eval_interval = parse_num(key, value)?,
            "eval_episodes" => self.eval_episodes = parse_num(key, value)?,
            "final_eval_episodes" => self.final_eval_episodes = parse_num(key, value)?,
            "eval_seeds" => self.eval_seeds = parse_list(key, value)?,
            "robustify.k" => self.robustify_k = parse_num(key, value)?,
            "sac.hidden" => self.sac.hidden = parse_list(key, value)?,
            "sac.lr" => self.sac.lr = parse_num(key, value)?,
            "sac.batch_size" => self.sac.batch_size = parse_num(key, value)?,
            "sac.polyak" => self.sac.polyak = parse_num(key, value)?,
            "sac.warmup_steps" => self.sac.warmup_steps = parse_num(key, value)?,
            "sac.buffer_capacity" => self.sac.buffer_capacity = parse_num(key, value)?,
            "sac.init_alpha" => self.sac.init_alpha = parse_num(key, value)?,
            "classifier.n_ensemble" => self.classifier.n_ensemble = parse_num(key, value)?,
            "classifier.hidden" => self.classifier.hidden = parse_list(key, value)?,
            "classifier.lr" => self.classifier.lr = parse_num(key, value)?,
            "classifier.input_noise_std" => {
                self.classifier.input_noise_std = parse_num(key, value)?
            }
            "classifier.clip" => self.classifier.clip = parse_num(key, value)?,
            "classifier.batch_size" => self.classifier.batch_size = parse_num(key, value)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: 0,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return fail("lambda must be finite and >= 0");
        }
        if !(self.robustify_k >= 0.0 && self.robustify_k.is_finite()) {
            return fail("robustify.k must be finite and >= 0");
        }
        if !(self.transition_noise >= 0.0 && self.transition_noise.is_finite()) {
            return fail("transition_noise must be finite and >= 0");
        }
        if self.total_steps == 0 {
            return fail("total_steps must be positive");
        }
        if self.eval_interval == 0 {
            return fail("eval_interval must be positive");
        }
        if self.eval_episodes == 0 || self.final_eval_episodes == 0 {
            return fail("evaluation needs at least one episode");
        }
        if self.eval_seeds.is_empty() {
            return fail("eval_seeds must not be empty");
        }
        if self.dataset_size == Some(0) {
            return fail("dataset_size must be at least 1");
        }
        if self.sac.hidden.is_empty() || self.sac.hidden.contains(&0) {
            return fail("sac.hidden must list positive layer widths");
        }
        if self.classifier.hidden.is_empty() || self.classifier.hidden.contains(&0) {
            return fail("classifier.hidden must list positive layer widths");
        }
        if !(self.sac.lr > 0.0 && self.classifier.lr > 0.0) {
            return fail("learning rates must be positive");
        }
        if !(self.sac.polyak > 0.0 && self.sac.polyak <= 1.0) {
            return fail("sac.polyak must lie in (0, 1]");
        }
        if self.sac.batch_size == 0 || self.sac.buffer_capacity == 0 {
            return fail("sac.batch_size and sac.buffer_capacity must be positive");
        }
        if !(self.sac.init_alpha > 0.0) {
            return fail("sac.init_alpha must be positive");
        }
        if self.classifier.n_ensemble == 0 {
            return fail("classifier.n_ensemble must be at least 1");
        }
        if self.classifier.batch_size < 2 {
            return fail("classifier.batch_size must be at least 2");
        }
        if !(self.classifier.clip > 0.0) {
            return fail("classifier.clip must be positive");
        }
        if !(self.classifier.input_noise_std >= 0.0) {
            return fail("classifier.input_noise_std must be >= 0");
        }
        if self.algo.uses_classifiers() && self.dataset_path.is_none() {
            return fail("this algorithm needs dataset_path");
        }
        Ok(())
    }

    /// Resampling scale actually used: zero unless the algorithm is `dap_u`.
    pub fn effective_k(&self) -> f64 {
        match self.algo {
            AlgoKind::DapU => self.robustify_k,
            _ => 0.0,
        }
    }

    /// Fully resolved configuration in the same format [`ExperimentConfig::parse`] reads.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        put("algo", self.algo.to_string());
        put("env", self.env.to_string());
        put("seed", self.seed.to_string());
        put("total_steps", self.total_steps.to_string());
        put("lambda", self.lambda.to_string());
        put(
            "lambda_sign",
            match self.lambda_sign {
                LambdaSign::Penalty => "penalty",
                LambdaSign::Literal => "literal",
            }
            .into(),
        );
        put(
            "reward_action",
            match self.reward_action {
                RewardAction::Target => "a_tgt",
                RewardAction::Executed => "executed",
            }
            .into(),
        );
        put(
            "stored_action",
            match self.stored_action {
                StoredAction::Executed => "executed",
                StoredAction::Proposed => "proposed",
            }
            .into(),
        );
        put("delta_r_warmup", self.delta_r_warmup.to_string());
        put("transition_noise", self.transition_noise.to_string());
        put(
            "dataset_path",
            self.dataset_path
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        );
        put(
            "dataset_size",
            self.dataset_size
                .map_or_else(|| "all".to_string(), |m| m.to_string()),
        );
        put("eval_interval", self.eval_interval.to_string());
        put("eval_episodes", self.eval_episodes.to_string());
        put("final_eval_episodes", self.final_eval_episodes.to_string());
        put("eval_seeds", join(&self.eval_seeds));
        put("robustify.k", self.robustify_k.to_string());
        put("sac.hidden", join(&self.sac.hidden));
        put("sac.lr", self.sac.lr.to_string());
        put("sac.batch_size", self.sac.batch_size.to_string());
        put("sac.polyak", self.sac.polyak.to_string());
        put("sac.warmup_steps", self.sac.warmup_steps.to_string());
        put("sac.buffer_capacity", self.sac.buffer_capacity.to_string());
        put("sac.init_alpha", self.sac.init_alpha.to_string());
        put(
            "classifier.n_ensemble",
            self.classifier.n_ensemble.to_string(),
        );
        put("classifier.hidden", join(&self.classifier.hidden));
        put("classifier.lr", self.classifier.lr.to_string());
        put(
            "classifier.input_noise_std",
            self.classifier.input_noise_std.to_string(),
        );
        put("classifier.clip", self.classifier.clip.to_string());
        put(
            "classifier.batch_size",
            self.classifier.batch_size.to_string(),
        );
        s
    }
}

//! Domain-classifier ensembles.
//!
//! Each ensemble member is a pair of binary classifiers telling source
//! transitions (label 0) from target transitions (label 1): one over
//! `(s, a, s')`, one over `(s, a)`. By Bayes' rule the difference of their
//! target log-odds estimates `log p_target(s'|s,a) − log p_source(s'|s,a)`.
//! The spread of that estimate across members measures how much the members
//! disagree.
//!
//! Inputs are the observation features `obs(s)`, the action and the
//! observation increment `obs(s') − obs(s)`, standardised with a fixed
//! [`FeatureNormalizer`].

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nn::{Activation, Adam, AdamConfig, Matrix, Mlp, NnError};

/// Probabilities are floored here before taking logs.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error("non-finite classifier loss ({0})")]
    NonFiniteLoss(f64),
    #[error("classifier batches must be nonempty")]
    EmptyBatch,
    #[error("{0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub n_ensemble: usize,
    pub hidden: Vec<usize>,
    pub lr: f64,
    /// Std of Gaussian noise added to standardised inputs during training.
    pub input_noise_std: f64,
    /// Symmetric clip applied to the ensemble-mean adjustment before it enters a reward.
    pub clip: f64,
    /// Total batch, drawn half from each domain.
    pub batch_size: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            n_ensemble: 5,
            hidden: vec![64, 64],
            lr: 1e-3,
            input_noise_std: 0.1,
            clip: 10.0,
            batch_size: 128,
        }
    }
}

/// `(s, a, s')` triples as observation features.
#[derive(Debug, Clone, PartialEq)]
pub struct SasBatch {
    pub obs: Matrix,
    pub actions: Matrix,
    pub next_obs: Matrix,
}

impl SasBatch {
    pub fn single(obs: &[f64], action: &[f64], next_obs: &[f64]) -> Self {
        Self {
            obs: Matrix::from_row(obs),
            actions: Matrix::from_row(action),
            next_obs: Matrix::from_row(next_obs),
        }
    }

    pub fn len(&self) -> usize {
        self.obs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.rows() == 0
    }

    /// Raw `[obs | action | next_obs − obs]` rows.
    pub fn features(&self) -> Matrix {
        let n = self.len();
        let o = self.obs.cols();
        let a = self.actions.cols();
        let mut out = Matrix::zeros(n, 2 * o + a);
        for i in 0..n {
            let row = out.row_mut(i);
            row[..o].copy_from_slice(self.obs.row(i));
            row[o..o + a].copy_from_slice(self.actions.row(i));
            for (k, (x1, x0)) in self.next_obs.row(i).iter().zip(self.obs.row(i)).enumerate() {
                row[o + a + k] = x1 - x0;
            }
        }
        out
    }
}

/// Per-feature affine standardisation `(x − mean) / std`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureNormalizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl FeatureNormalizer {
    pub fn identity(dim: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            std: vec![1.0; dim],
        }
    }

    /// Column statistics of `features`; near-constant columns keep unit scale.
    pub fn fit(features: &Matrix) -> Self {
        let n = features.rows().max(1) as f64;
        let d = features.cols();
        let mut mean = vec![0.0; d];
        for i in 0..features.rows() {
            for (m, x) in mean.iter_mut().zip(features.row(i)) {
                *m += x / n;
            }
        }
        let mut var = vec![0.0; d];
        for i in 0..features.rows() {
            for ((v, x), m) in var.iter_mut().zip(features.row(i)).zip(&mean) {
                *v += (x - m) * (x - m) / n;
            }
        }
        let std = var
            .into_iter()
            .map(|v| {
                let s = v.sqrt();
                if s > 1e-8 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        Self { mean, std }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, features: &mut Matrix) {
        assert_eq!(features.cols(), self.dim(), "normalizer width mismatch");
        for i in 0..features.rows() {
            for ((x, m), s) in features
                .row_mut(i)
                .iter_mut()
                .zip(&self.mean)
                .zip(&self.std)
            {
                *x = (*x - m) / s;
            }
        }
    }
}

/// Two-logit classifiers over `(s, a, s')` and `(s, a)`. Logit 0 is
/// "source", logit 1 is "target".
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierPair {
    pub sas_net: Mlp,
    pub sa_net: Mlp,
    sas_opt: Adam,
    sa_opt: Adam,
}

impl ClassifierPair {
    pub fn new<R: Rng + ?Sized>(
        obs_dim: usize,
        action_dim: usize,
        config: &ClassifierConfig,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        let build = |input: usize, rng: &mut R| {
            let mut sizes = vec![input];
            sizes.extend_from_slice(&config.hidden);
            sizes.push(2);
            Mlp::new(&sizes, Activation::Relu, rng)
        };
        let sas_net = build(2 * obs_dim + action_dim, rng)?;
        let sa_net = build(obs_dim + action_dim, rng)?;
        let adam = AdamConfig::with_lr(config.lr);
        Ok(Self {
            sas_opt: Adam::new(sas_net.num_params(), adam)?,
            sa_opt: Adam::new(sa_net.num_params(), adam)?,
            sas_net,
            sa_net,
        })
    }

    /// Exchanges the two output logits of both nets.
    pub fn swap_labels(&mut self) {
        for net in [&mut self.sas_net, &mut self.sa_net] {
            let last = net.num_layers() - 1;
            let fan_in = net.layer_sizes()[last];
            let w = net.weights_mut(last);
            let (row0, row1) = w.split_at_mut(fan_in);
            row0.swap_with_slice(row1);
            net.bias_mut(last).swap(0, 1);
        }
    }
}

/// `(log p(source|·), log p(target|·))` from two logits, each floored at [`PROB_FLOOR`].
pub fn log_probs(logits: [f64; 2]) -> (f64, f64) {
    let [l0, l1] = logits;
    let (hi, lo) = if l0 >= l1 { (l0, l1) } else { (l1, l0) };
    let lse = hi + (lo - hi).exp().ln_1p();
    let floor = PROB_FLOOR.ln();
    ((l0 - lse).max(floor), (l1 - lse).max(floor))
}

/// Ensemble estimate of the dynamics reward adjustment at one transition.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaREstimate {
    pub mean: f64,
    /// Population standard deviation over members.
    pub std: f64,
    pub per_member: Vec<f64>,
}

impl DeltaREstimate {
    pub fn zero(n: usize) -> Self {
        Self {
            mean: 0.0,
            std: 0.0,
            per_member: vec![0.0; n],
        }
    }

    pub fn from_members(per_member: Vec<f64>) -> Self {
        assert!(!per_member.is_empty(), "estimate needs at least one member");
        let first = per_member[0];
        if per_member.iter().all(|v| *v == first) {
            return Self {
                mean: first,
                std: 0.0,
                per_member,
            };
        }
        let n = per_member.len() as f64;
        let mean = per_member.iter().sum::<f64>() / n;
        let var = per_member
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / n;
        Self {
            mean,
            std: var.sqrt(),
            per_member,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierEnsemble {
    members: Vec<ClassifierPair>,
    obs_dim: usize,
    action_dim: usize,
    normalizer: FeatureNormalizer,
    config: ClassifierConfig,
    train_steps: u64,
}

impl ClassifierEnsemble {
    pub fn new<R: Rng + ?Sized>(
        obs_dim: usize,
        action_dim: usize,
        normalizer: FeatureNormalizer,
        config: ClassifierConfig,
        rng: &mut R,
    ) -> Result<Self, ClassifierError> {
        if config.n_ensemble == 0 {
            return Err(ClassifierError::Config(
                "n_ensemble must be at least 1".into(),
            ));
        }
        if !(config.input_noise_std >= 0.0) {
            return Err(ClassifierError::Config(
                "input_noise_std must be >= 0".into(),
            ));
        }
        if !(config.clip > 0.0) {
            return Err(ClassifierError::Config("clip must be positive".into()));
        }
        if normalizer.dim() != 2 * obs_dim + action_dim {
            return Err(NnError::Shape {
                expected: 2 * obs_dim + action_dim,
                got: normalizer.dim(),
            }
            .into());
        }
        let members = (0..config.n_ensemble)
            .map(|_| ClassifierPair::new(obs_dim, action_dim, &config, rng))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            members,
            obs_dim,
            action_dim,
            normalizer,
            config,
            train_steps: 0,
        })
    }

    pub fn config(&self) -> &ClassifierConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ClassifierPair] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [ClassifierPair] {
        &mut self.members
    }

    pub fn normalizer(&self) -> &FeatureNormalizer {
        &self.normalizer
    }

    pub fn train_steps(&self) -> u64 {
        self.train_steps
    }

    /// Marks the ensemble as trained without touching its weights, so that
    /// hand-constructed members can be queried.
    pub fn mark_trained(&mut self) {
        self.train_steps = self.train_steps.max(1);
    }

    fn normalized(&self, batch: &SasBatch) -> Matrix {
        assert_eq!(batch.obs.cols(), self.obs_dim, "observation width mismatch");
        assert_eq!(
            batch.actions.cols(),
            self.action_dim,
            "action width mismatch"
        );
        let mut f = batch.features();
        self.normalizer.apply(&mut f);
        f
    }

    /// One gradient step for every member on binary cross-entropy, source
    /// rows labelled 0 and target rows labelled 1. Returns the mean loss over
    /// members and both nets.
    pub fn train_step<R: Rng + ?Sized>(
        &mut self,
        source: &SasBatch,
        target: &SasBatch,
        rng: &mut R,
    ) -> Result<f64, ClassifierError> {
        if source.is_empty() || target.is_empty() {
            return Err(ClassifierError::EmptyBatch);
        }
        let fs = self.normalized(source);
        let ft = self.normalized(target);
        let n = fs.rows() + ft.rows();
        let width = fs.cols();
        let sa_width = self.obs_dim + self.action_dim;
        let mut clean = Vec::with_capacity(n * width);
        clean.extend_from_slice(fs.as_slice());
        clean.extend_from_slice(ft.as_slice());
        let labels: Vec<usize> = (0..n).map(|i| usize::from(i >= fs.rows())).collect();
        let noise_std = self.config.input_noise_std;
        let mut total = 0.0;
        for member in &mut self.members {
            let mut sas = Matrix::from_vec(n, width, clean.clone());
            if noise_std > 0.0 {
                for x in sas.as_mut_slice() {
                    let z: f64 = rng.sample(StandardNormal);
                    *x += noise_std * z;
                }
            }
            let sa = sas.columns(0, sa_width);
            total += cross_entropy_step(&mut member.sas_net, &mut member.sas_opt, &sas, &labels)?;
            total += cross_entropy_step(&mut member.sa_net, &mut member.sa_opt, &sa, &labels)?;
        }
        let loss = total / (2 * self.members.len()) as f64;
        if !loss.is_finite() {
            return Err(ClassifierError::NonFiniteLoss(loss));
        }
        self.train_steps += 1;
        Ok(loss)
    }

    /// Raw `(sas, sa)` logits of every member for every row (no input noise).
    pub fn logits(&self, batch: &SasBatch) -> Vec<(Matrix, Matrix)> {
        let sas = self.normalized(batch);
        let sa = sas.columns(0, self.obs_dim + self.action_dim);
        self.members
            .iter()
            .map(|m| {
                (
                    m.sas_net.forward_batch(&sas).output().clone(),
                    m.sa_net.forward_batch(&sa).output().clone(),
                )
            })
            .collect()
    }

    /// Adjustment estimates for every row of `batch`.
    ///
    /// Member value: `log p(t|s,a,s') − log p(t|s,a) − log p(s|s,a,s') + log p(s|s,a)`.
    /// An untrained ensemble returns zeros.
    pub fn delta_r_batch(&self, batch: &SasBatch) -> Vec<DeltaREstimate> {
        let n = batch.len();
        if self.train_steps == 0 {
            return vec![DeltaREstimate::zero(self.members.len()); n];
        }
        let logits = self.logits(batch);
        (0..n)
            .map(|i| {
                let per_member = logits
                    .iter()
                    .map(|(sas, sa)| {
                        let (ls_sas, lt_sas) = log_probs([sas.get(i, 0), sas.get(i, 1)]);
                        let (ls_sa, lt_sa) = log_probs([sa.get(i, 0), sa.get(i, 1)]);
                        (lt_sas - ls_sas) - (lt_sa - ls_sa)
                    })
                    .collect();
                DeltaREstimate::from_members(per_member)
            })
            .collect()
    }

    pub fn delta_r(&self, obs: &[f64], action: &[f64], next_obs: &[f64]) -> DeltaREstimate {
        self.delta_r_batch(&SasBatch::single(obs, action, next_obs))
            .pop()
            .expect("one row in, one estimate out")
    }

    /// Member disagreement at the previous transition `(s_{t−1}, a_tgt_{t−1}, s_t)`;
    /// zero when there is none (first step of an episode).
    pub fn sigma(&self, previous: Option<(&[f64], &[f64], &[f64])>) -> f64 {
        match previous {
            None => 0.0,
            Some((obs, action, next_obs)) => self.delta_r(obs, action, next_obs).std,
        }
    }
}

fn cross_entropy_step(
    net: &mut Mlp,
    opt: &mut Adam,
    input: &Matrix,
    labels: &[usize],
) -> Result<f64, ClassifierError> {
    let n = input.rows();
    let inv_n = 1.0 / n as f64;
    let tape = net.forward_batch(input);
    let mut d_out = Matrix::zeros(n, 2);
    let mut loss = 0.0;
    for (i, &label) in labels.iter().enumerate() {
        let row = tape.output().row(i);
        let (hi, lo) = if row[0] >= row[1] {
            (row[0], row[1])
        } else {
            (row[1], row[0])
        };
        let lse = hi + (lo - hi).exp().ln_1p();
        loss -= (row[label] - lse) * inv_n;
        for k in 0..2 {
            let p = (row[k] - lse).exp();
            let y = if k == label { 1.0 } else { 0.0 };
            d_out.set(i, k, (p - y) * inv_n);
        }
    }
    let mut grads = net.zero_grads();
    net.backward_batch(&tape, &d_out, &mut grads);
    opt.step(net.params_mut(), &grads)?;
    Ok(loss)
}

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::nn::{Activation, Matrix, Mlp, NnError, Tape};

pub const LOG_STD_MIN: f64 = -20.0;
pub const LOG_STD_MAX: f64 = 2.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionMode {
    Stochastic,
    Deterministic,
}

/// Tanh-squashed diagonal Gaussian policy.
///
/// The trunk outputs `[mean | log_std]` for every action dimension; samples
/// `u ~ N(mean, exp(log_std))` are squashed with `tanh` and rescaled onto
/// `[low, high]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianPolicy {
    net: Mlp,
    low: Vec<f64>,
    high: Vec<f64>,
}

/// A reparameterised batch of actions together with everything needed to
/// backpropagate through it.
#[derive(Debug, Clone)]
pub struct PolicySample {
    pub actions: Matrix,
    pub log_probs: Vec<f64>,
    tape: Tape,
    squashed: Matrix,
    noise: Matrix,
    std: Matrix,
    log_std_clamped: Vec<bool>,
}

impl GaussianPolicy {
    pub fn new<R: Rng + ?Sized>(
        obs_dim: usize,
        hidden: &[usize],
        low: Vec<f64>,
        high: Vec<f64>,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        let mut sizes = vec![obs_dim];
        sizes.extend_from_slice(hidden);
        sizes.push(2 * low.len());
        let net = Mlp::new(&sizes, Activation::Relu, rng)?;
        Self::from_net(net, low, high)
    }

    pub fn from_net(net: Mlp, low: Vec<f64>, high: Vec<f64>) -> Result<Self, NnError> {
        if low.is_empty() || low.len() != high.len() {
            return Err(NnError::Config(
                "action bounds must be nonempty and equally long".into(),
            ));
        }
        if low.iter().zip(&high).any(|(l, h)| !(l < h)) {
            return Err(NnError::Config(
                "action_low must be below action_high".into(),
            ));
        }
        if net.output_dim() != 2 * low.len() {
            return Err(NnError::Shape {
                expected: 2 * low.len(),
                got: net.output_dim(),
            });
        }
        Ok(Self { net, low, high })
    }

    pub fn net(&self) -> &Mlp {
        &self.net
    }

    pub fn net_mut(&mut self) -> &mut Mlp {
        &mut self.net
    }

    pub fn obs_dim(&self) -> usize {
        self.net.input_dim()
    }

    pub fn action_dim(&self) -> usize {
        self.low.len()
    }

    pub fn action_low(&self) -> &[f64] {
        &self.low
    }

    pub fn action_high(&self) -> &[f64] {
        &self.high
    }

    #[inline]
    fn half_range(&self, j: usize) -> f64 {
        0.5 * (self.high[j] - self.low[j])
    }

    #[inline]
    fn mid(&self, j: usize) -> f64 {
        0.5 * (self.high[j] + self.low[j])
    }

    fn log_half_range_sum(&self) -> f64 {
        (0..self.action_dim())
            .map(|j| self.half_range(j).ln())
            .sum()
    }

    fn check_obs(&self, obs: &[f64]) {
        assert_eq!(
            obs.len(),
            self.obs_dim(),
            "observation width does not match the policy"
        );
    }

    /// Mean and clamped log-std heads for one observation.
    pub fn heads(&self, obs: &[f64]) -> (Vec<f64>, Vec<f64>) {
        self.check_obs(obs);
        let out = self.net.forward_batch(&Matrix::from_row(obs));
        let row = out.output().row(0);
        let a = self.action_dim();
        let mean = row[..a].to_vec();
        let log_std = row[a..]
            .iter()
            .map(|v| v.clamp(LOG_STD_MIN, LOG_STD_MAX))
            .collect();
        (mean, log_std)
    }

    pub fn select_action<R: Rng + ?Sized>(
        &self,
        obs: &[f64],
        mode: ActionMode,
        rng: &mut R,
    ) -> Vec<f64> {
        self.check_obs(obs);
        self.act_batch(&Matrix::from_row(obs), mode, rng).into_vec()
    }

    /// Actions for a batch of observations. Deterministic mode returns the
    /// rescaled `tanh(mean)` and draws no random numbers.
    pub fn act_batch<R: Rng + ?Sized>(
        &self,
        obs: &Matrix,
        mode: ActionMode,
        rng: &mut R,
    ) -> Matrix {
        let out = self.net.forward_batch(obs);
        let out = out.output();
        let a = self.action_dim();
        let mut actions = Matrix::zeros(obs.rows(), a);
        for i in 0..obs.rows() {
            let row = out.row(i);
            for j in 0..a {
                let u = match mode {
                    ActionMode::Deterministic => row[j],
                    ActionMode::Stochastic => {
                        let z: f64 = rng.sample(StandardNormal);
                        row[j] + row[a + j].clamp(LOG_STD_MIN, LOG_STD_MAX).exp() * z
                    }
                };
                actions.set(i, j, self.squash(j, u));
            }
        }
        actions
    }

    #[inline]
    fn squash(&self, j: usize, u: f64) -> f64 {
        (self.mid(j) + self.half_range(j) * u.tanh()).clamp(self.low[j], self.high[j])
    }

    /// `log π(a | s)` including the tanh and rescaling Jacobians. The action is
    /// pulled `1e-6` inside the bounds (in normalised units) before inversion.
    pub fn log_prob(&self, obs: &[f64], action: &[f64]) -> f64 {
        assert_eq!(action.len(), self.action_dim(), "action width mismatch");
        let (mean, log_std) = self.heads(obs);
        let mut total = -self.log_half_range_sum();
        for j in 0..self.action_dim() {
            let y = ((action[j] - self.mid(j)) / self.half_range(j)).clamp(-1.0 + 1e-6, 1.0 - 1e-6);
            let u = y.atanh();
            let z = (u - mean[j]) / log_std[j].exp();
            total += -0.5 * z * z - log_std[j] - HALF_LN_2PI - (1.0 - y * y).ln();
        }
        total
    }

    /// Reparameterised sample `a = squash(mean + std · ε)` with its log-probability.
    pub fn sample<R: Rng + ?Sized>(&self, obs: &Matrix, rng: &mut R) -> PolicySample {
        let tape = self.net.forward_batch(obs);
        let n = obs.rows();
        let a = self.action_dim();
        let mut actions = Matrix::zeros(n, a);
        let mut squashed = Matrix::zeros(n, a);
        let mut noise = Matrix::zeros(n, a);
        let mut std = Matrix::zeros(n, a);
        let mut log_std_clamped = vec![false; n * a];
        let mut log_probs = vec![0.0; n];
        let log_half = self.log_half_range_sum();
        for i in 0..n {
            let row = tape.output().row(i);
            let mut lp = -log_half;
            for j in 0..a {
                let raw = row[a + j];
                let ls = raw.clamp(LOG_STD_MIN, LOG_STD_MAX);
                log_std_clamped[i * a + j] = raw != ls;
                let sd = ls.exp();
                let eps: f64 = rng.sample(StandardNormal);
                let u = row[j] + sd * eps;
                let y = u.tanh();
                lp += -0.5 * eps * eps - ls - HALF_LN_2PI - log_one_minus_tanh_sq(u);
                actions.set(i, j, self.squash(j, u));
                squashed.set(i, j, y);
                noise.set(i, j, eps);
                std.set(i, j, sd);
            }
            log_probs[i] = lp;
        }
        PolicySample {
            actions,
            log_probs,
            tape,
            squashed,
            noise,
            std,
            log_std_clamped,
        }
    }

    /// Backpropagates `dL/da` and `dL/dlog π` of a sample into `grads`.
    pub fn backward_sample(
        &self,
        sample: &PolicySample,
        d_actions: &Matrix,
        d_log_probs: &[f64],
        grads: &mut [f64],
    ) {
        let n = sample.actions.rows();
        let a = self.action_dim();
        assert_eq!(d_actions.rows(), n);
        assert_eq!(d_actions.cols(), a);
        assert_eq!(d_log_probs.len(), n);
        let mut d_out = Matrix::zeros(n, 2 * a);
        for i in 0..n {
            let dlp = d_log_probs[i];
            for j in 0..a {
                let y = sample.squashed.get(i, j);
                let sd = sample.std.get(i, j);
                let eps = sample.noise.get(i, j);
                // dL/du through the squashed action and the tanh correction.
                let du = d_actions.get(i, j) * self.half_range(j) * (1.0 - y * y) + dlp * 2.0 * y;
                d_out.set(i, j, du);
                let dls = if sample.log_std_clamped[i * a + j] {
                    0.0
                } else {
                    du * sd * eps - dlp
                };
                d_out.set(i, a + j, dls);
            }
        }
        self.net.backward_batch(&sample.tape, &d_out, grads);
    }
}

/// `ln(1 − tanh²u)` without cancellation for large `|u|`.
#[inline]
fn log_one_minus_tanh_sq(u: f64) -> f64 {
    2.0 * (std::f64::consts::LN_2 - u - softplus(-2.0 * u))
}

#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

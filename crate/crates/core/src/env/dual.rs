use rand::Rng;

use super::{Env, EnvError, StepResult};

/// Dual-action view of an environment: actions are `[a_src | a_tgt]`, twice
/// the wrapped width. Only `a_src` reaches the dynamics; the reward is the
/// wrapped task reward.
#[derive(Debug, Clone, Copy)]
pub struct DualEnv<'a> {
    inner: &'a Env,
}

pub fn make_dual(env: &Env) -> DualEnv<'_> {
    DualEnv { inner: env }
}

impl<'a> DualEnv<'a> {
    pub fn inner(&self) -> &'a Env {
        self.inner
    }

    pub fn action_dim(&self) -> usize {
        2 * self.inner.spec().action_dim
    }

    pub fn action_low(&self) -> Vec<f64> {
        self.inner.spec().action_low.repeat(2)
    }

    pub fn action_high(&self) -> Vec<f64> {
        self.inner.spec().action_high.repeat(2)
    }

    /// Splits a dual action into `(a_src, a_tgt)`.
    pub fn split<'b>(&self, action: &'b [f64]) -> Result<(&'b [f64], &'b [f64]), EnvError> {
        if action.len() != self.action_dim() {
            return Err(EnvError::Dimension {
                what: "dual action",
                expected: self.action_dim(),
                got: action.len(),
            });
        }
        Ok(action.split_at(self.inner.spec().action_dim))
    }

    pub fn step(&self, state: &[f64], action: &[f64]) -> Result<StepResult, EnvError> {
        let (a_src, _) = self.split(action)?;
        self.inner.step(state, a_src)
    }

    pub fn step_with<R: Rng + ?Sized>(
        &self,
        state: &[f64],
        action: &[f64],
        rng: &mut R,
    ) -> Result<StepResult, EnvError> {
        let (a_src, _) = self.split(action)?;
        self.inner.step_with(state, a_src, rng)
    }
}

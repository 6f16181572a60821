//! Toy continuous-control MDPs shipped as source/target pairs.
//!
//! A pair shares state space, action space, reward, discount and initial
//! distribution; only the transition dynamics differ. Transitions are
//! deterministic unless a transition noise level is set, in which case
//! isotropic Gaussian noise is added to the next state identically in both
//! domains.

mod dual;
mod pendulum;
mod pointmass;

pub use dual::{make_dual, DualEnv};
pub use pendulum::PendulumDynamics;
pub use pointmass::PointMassDynamics;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("unknown environment id `{0}` (expected `pointmass` or `pendulum`)")]
    UnknownId(String),
    #[error("{what} has length {got}, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite {0} passed to step")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnvId {
    PointMass,
    Pendulum,
}

impl EnvId {
    pub fn as_str(self) -> &'static str {
        match self {
            EnvId::PointMass => "pointmass",
            EnvId::Pendulum => "pendulum",
        }
    }
}

impl fmt::Display for EnvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvId {
    type Err = EnvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pointmass" => Ok(EnvId::PointMass),
            "pendulum" => Ok(EnvId::Pendulum),
            other => Err(EnvError::UnknownId(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Source,
    Target,
}

/// Static description of an MDP.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpSpec {
    pub id: EnvId,
    pub state_dim: usize,
    /// Width of the feature vector networks see; see [`Env::observe`].
    pub obs_dim: usize,
    pub action_dim: usize,
    pub action_low: Vec<f64>,
    pub action_high: Vec<f64>,
    pub gamma: f64,
    pub max_episode_steps: usize,
    pub dynamics_params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub next_state: Vec<f64>,
    pub reward: f64,
    /// Terminal flag. The shipped environments never terminate early; the
    /// fixed horizon is enforced by whoever runs the episode.
    pub done: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dynamics {
    PointMass(PointMassDynamics),
    Pendulum(PendulumDynamics),
}

/// One concrete MDP.
#[derive(Debug, Clone, PartialEq)]
pub struct Env {
    spec: MdpSpec,
    dynamics: Dynamics,
    transition_noise_std: f64,
}

impl Env {
    pub fn new(id: EnvId, domain: Domain) -> Self {
        let dynamics = match id {
            EnvId::PointMass => Dynamics::PointMass(match domain {
                Domain::Source => PointMassDynamics::source(),
                Domain::Target => PointMassDynamics::target(),
            }),
            EnvId::Pendulum => Dynamics::Pendulum(match domain {
                Domain::Source => PendulumDynamics::source(),
                Domain::Target => PendulumDynamics::target(),
            }),
        };
        Self::from_dynamics(dynamics)
    }

    pub fn from_dynamics(dynamics: Dynamics) -> Self {
        let spec = match &dynamics {
            Dynamics::PointMass(d) => d.spec(),
            Dynamics::Pendulum(d) => d.spec(),
        };
        Self {
            spec,
            dynamics,
            transition_noise_std: 0.0,
        }
    }

    /// Adds zero-mean Gaussian noise of the given standard deviation to every
    /// next-state component in [`Env::step_with`].
    pub fn with_transition_noise(mut self, std: f64) -> Self {
        assert!(
            std >= 0.0 && std.is_finite(),
            "noise std must be finite and >= 0"
        );
        self.transition_noise_std = std;
        self
    }

    pub fn spec(&self) -> &MdpSpec {
        &self.spec
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    pub fn id(&self) -> EnvId {
        self.spec.id
    }

    pub fn transition_noise_std(&self) -> f64 {
        self.transition_noise_std
    }

    /// Draws an initial state from `d0`; identical seeds give identical states.
    pub fn reset(&self, seed: u64) -> Vec<f64> {
        let mut rng = crate::rng::seeded(seed);
        self.reset_with(&mut rng)
    }

    pub fn reset_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match &self.dynamics {
            Dynamics::PointMass(d) => d.sample_initial(rng),
            Dynamics::Pendulum(d) => d.sample_initial(rng),
        }
    }

    /// Network features for a state. Identity for the point mass,
    /// `(cos θ, sin θ, θ̇)` for the pendulum.
    pub fn observe(&self, state: &[f64]) -> Vec<f64> {
        match &self.dynamics {
            Dynamics::PointMass(_) => state.to_vec(),
            Dynamics::Pendulum(_) => vec![state[0].cos(), state[0].sin(), state[1]],
        }
    }

    pub fn clamp_action(&self, action: &[f64]) -> Vec<f64> {
        action
            .iter()
            .zip(self.spec.action_low.iter().zip(&self.spec.action_high))
            .map(|(a, (lo, hi))| a.clamp(*lo, *hi))
            .collect()
    }

    /// Shared reward function `R(s, a, s')`.
    pub fn reward(&self, state: &[f64], action: &[f64], next_state: &[f64]) -> f64 {
        match &self.dynamics {
            Dynamics::PointMass(d) => d.reward(next_state),
            Dynamics::Pendulum(d) => d.reward(state, action),
        }
    }

    /// Noise-free successor `f(s, a)` for an already clamped action.
    pub fn mean_next_state(&self, state: &[f64], action: &[f64]) -> Vec<f64> {
        match &self.dynamics {
            Dynamics::PointMass(d) => d.integrate(state, action),
            Dynamics::Pendulum(d) => d.integrate(state, action),
        }
    }

    fn validate(&self, state: &[f64], action: &[f64]) -> Result<(), EnvError> {
        if state.len() != self.spec.state_dim {
            return Err(EnvError::Dimension {
                what: "state",
                expected: self.spec.state_dim,
                got: state.len(),
            });
        }
        if action.len() != self.spec.action_dim {
            return Err(EnvError::Dimension {
                what: "action",
                expected: self.spec.action_dim,
                got: action.len(),
            });
        }
        if !state.iter().all(|v| v.is_finite()) {
            return Err(EnvError::NonFinite("state"));
        }
        if !action.iter().all(|v| v.is_finite()) {
            return Err(EnvError::NonFinite("action"));
        }
        Ok(())
    }

    /// Deterministic transition. The action is clamped into the bounds first.
    pub fn step(&self, state: &[f64], action: &[f64]) -> Result<StepResult, EnvError> {
        self.validate(state, action)?;
        let action = self.clamp_action(action);
        let next_state = self.mean_next_state(state, &action);
        Ok(self.finish(state, &action, next_state))
    }

    /// Transition with the configured noise level; equal to [`Env::step`] when
    /// the noise level is zero (no random numbers are drawn in that case).
    pub fn step_with<R: Rng + ?Sized>(
        &self,
        state: &[f64],
        action: &[f64],
        rng: &mut R,
    ) -> Result<StepResult, EnvError> {
        self.validate(state, action)?;
        let action = self.clamp_action(action);
        let mut next_state = self.mean_next_state(state, &action);
        if self.transition_noise_std > 0.0 {
            for v in &mut next_state {
                let z: f64 = rng.sample(StandardNormal);
                *v += self.transition_noise_std * z;
            }
        }
        Ok(self.finish(state, &action, next_state))
    }

    fn finish(&self, state: &[f64], action: &[f64], mut next_state: Vec<f64>) -> StepResult {
        if let Dynamics::Pendulum(d) = &self.dynamics {
            d.wrap(&mut next_state);
        }
        let reward = self.reward(state, action, &next_state);
        StepResult {
            next_state,
            reward,
            done: false,
        }
    }

    /// Log-density of `next_state` under the noisy transition from `(state, action)`.
    ///
    /// Only meaningful when a transition noise level is configured. Angle
    /// wrapping of the pendulum is ignored.
    pub fn transition_log_density(&self, state: &[f64], action: &[f64], next_state: &[f64]) -> f64 {
        let std = self.transition_noise_std;
        assert!(std > 0.0, "transition density needs a positive noise level");
        let action = self.clamp_action(action);
        let mean = self.mean_next_state(state, &action);
        let n = mean.len() as f64;
        let sq: f64 = mean
            .iter()
            .zip(next_state)
            .map(|(m, x)| (x - m) * (x - m))
            .sum();
        -0.5 * sq / (std * std) - n * (std.ln() + 0.5 * (2.0 * std::f64::consts::PI).ln())
    }
}

/// Source and target MDPs that differ only in their dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvPair {
    pub source: Env,
    pub target: Env,
}

impl EnvPair {
    pub fn new(id: EnvId) -> Self {
        Self {
            source: Env::new(id, Domain::Source),
            target: Env::new(id, Domain::Target),
        }
    }

    pub fn with_transition_noise(self, std: f64) -> Self {
        Self {
            source: self.source.with_transition_noise(std),
            target: self.target.with_transition_noise(std),
        }
    }

    pub fn id(&self) -> EnvId {
        self.source.id()
    }

    pub fn get(&self, domain: Domain) -> &Env {
        match domain {
            Domain::Source => &self.source,
            Domain::Target => &self.target,
        }
    }
}

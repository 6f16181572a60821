use std::collections::BTreeMap;

use rand::Rng;

use super::{EnvId, MdpSpec};

/// Planar point mass, state `(x, y, vx, vy)`, action a 2-D force in `[-1, 1]²`.
///
/// `v' = v + dt·(gain·R(rotation)·a − damping·v)`, `x' = x + dt·v'`,
/// reward `−‖x' − goal‖`. Episodes start at rest, uniformly inside
/// `[-0.1, 0.1]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMassDynamics {
    pub dt: f64,
    pub gain: f64,
    pub rotation: f64,
    pub damping: f64,
    pub goal: [f64; 2],
    pub start_half_width: f64,
}

impl PointMassDynamics {
    pub const HORIZON: usize = 200;

    pub fn source() -> Self {
        Self {
            dt: 0.05,
            gain: 1.0,
            rotation: 0.0,
            damping: 0.1,
            goal: [1.0, 1.0],
            start_half_width: 0.1,
        }
    }

    pub fn target() -> Self {
        Self {
            gain: 0.6,
            rotation: std::f64::consts::FRAC_PI_4,
            ..Self::source()
        }
    }

    pub(super) fn spec(&self) -> MdpSpec {
        let dynamics_params = BTreeMap::from([
            ("actuator_gain".to_string(), self.gain),
            ("actuator_rotation".to_string(), self.rotation),
            ("damping".to_string(), self.damping),
            ("dt".to_string(), self.dt),
        ]);
        MdpSpec {
            id: EnvId::PointMass,
            state_dim: 4,
            obs_dim: 4,
            action_dim: 2,
            action_low: vec![-1.0, -1.0],
            action_high: vec![1.0, 1.0],
            gamma: 0.99,
            max_episode_steps: Self::HORIZON,
            dynamics_params,
        }
    }

    pub(super) fn sample_initial<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let w = self.start_half_width;
        vec![rng.random_range(-w..=w), rng.random_range(-w..=w), 0.0, 0.0]
    }

    pub(super) fn integrate(&self, s: &[f64], a: &[f64]) -> Vec<f64> {
        let (sin, cos) = self.rotation.sin_cos();
        let fx = self.gain * (cos * a[0] - sin * a[1]);
        let fy = self.gain * (sin * a[0] + cos * a[1]);
        let vx = s[2] + self.dt * (fx - self.damping * s[2]);
        let vy = s[3] + self.dt * (fy - self.damping * s[3]);
        vec![s[0] + self.dt * vx, s[1] + self.dt * vy, vx, vy]
    }

    pub(super) fn reward(&self, next_state: &[f64]) -> f64 {
        let dx = next_state[0] - self.goal[0];
        let dy = next_state[1] - self.goal[1];
        -(dx * dx + dy * dy).sqrt()
    }
}

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;

use super::{EnvId, MdpSpec};

/// Torque-limited pendulum swing-up, state `(θ, θ̇)` with `θ = 0` hanging down.
///
/// `θ̈ = −(g/l)·sin θ − d·θ̇ + u/(m·l²)`, integrated with a semi-implicit Euler
/// step (velocity first, then angle from the new velocity). The velocity is
/// clipped to `±max_speed` and the angle wrapped into `[−π, π)`.
/// Reward `−(angle_from_upright² + 0.1·θ̇² + 0.001·u²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PendulumDynamics {
    pub dt: f64,
    pub gravity: f64,
    pub mass: f64,
    pub length: f64,
    pub damping: f64,
    pub max_speed: f64,
    pub max_torque: f64,
}

impl PendulumDynamics {
    pub const HORIZON: usize = 200;

    pub fn source() -> Self {
        Self {
            dt: 0.05,
            gravity: 10.0,
            mass: 1.0,
            length: 1.0,
            damping: 0.05,
            max_speed: 8.0,
            max_torque: 2.0,
        }
    }

    pub fn target() -> Self {
        Self {
            mass: 2.0,
            ..Self::source()
        }
    }

    pub(super) fn spec(&self) -> MdpSpec {
        let dynamics_params = BTreeMap::from([
            ("damping".to_string(), self.damping),
            ("dt".to_string(), self.dt),
            ("gravity".to_string(), self.gravity),
            ("length".to_string(), self.length),
            ("mass".to_string(), self.mass),
        ]);
        MdpSpec {
            id: EnvId::Pendulum,
            state_dim: 2,
            obs_dim: 3,
            action_dim: 1,
            action_low: vec![-self.max_torque],
            action_high: vec![self.max_torque],
            gamma: 0.99,
            max_episode_steps: Self::HORIZON,
            dynamics_params,
        }
    }

    pub(super) fn sample_initial<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        vec![rng.random_range(-PI..=PI), rng.random_range(-1.0..=1.0)]
    }

    pub fn angular_acceleration(&self, theta: f64, theta_dot: f64, torque: f64) -> f64 {
        -(self.gravity / self.length) * theta.sin() - self.damping * theta_dot
            + torque / (self.mass * self.length * self.length)
    }

    pub(super) fn integrate(&self, s: &[f64], a: &[f64]) -> Vec<f64> {
        let acc = self.angular_acceleration(s[0], s[1], a[0]);
        let theta_dot = (s[1] + self.dt * acc).clamp(-self.max_speed, self.max_speed);
        vec![s[0] + self.dt * theta_dot, theta_dot]
    }

    pub(super) fn wrap(&self, s: &mut [f64]) {
        s[0] = wrap_angle(s[0]);
    }

    pub(super) fn reward(&self, s: &[f64], a: &[f64]) -> f64 {
        let from_upright = wrap_angle(s[0] - PI);
        -(from_upright * from_upright + 0.1 * s[1] * s[1] + 0.001 * a[0] * a[0])
    }
}

/// Wraps into `[−π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    (theta + PI).rem_euclid(2.0 * PI) - PI
}

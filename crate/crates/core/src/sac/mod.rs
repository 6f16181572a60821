//! Maximum-entropy actor-critic (SAC) over a base or dual action space.

mod agent;
mod buffer;
mod policy;

pub use agent::{EntropyTemperature, SacAgent, SacConfig, SacError, SacLosses, TwinCritic};
pub use buffer::{ActionSelect, ReplayBuffer, Transition, TransitionBatch};
pub use policy::{ActionMode, GaussianPolicy, PolicySample, LOG_STD_MAX, LOG_STD_MIN};

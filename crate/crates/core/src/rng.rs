//! Seeded random streams.
//!
//! A run owns one seed. Every consumer of randomness (environment resets,
//! policy sampling, resampling noise, ...) gets its own ChaCha stream derived
//! from that seed, so adding draws to one consumer never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type RunRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Env,
    Policy,
    DualHalf,
    Resample,
    Sac,
    ClassifierInit,
    Classifier,
    Eval,
    Collect,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Env => 1,
            Stream::Policy => 2,
            Stream::DualHalf => 3,
            Stream::Resample => 4,
            Stream::Sac => 5,
            Stream::ClassifierInit => 6,
            Stream::Classifier => 7,
            Stream::Eval => 8,
            Stream::Collect => 9,
        }
    }
}

pub fn stream(seed: u64, which: Stream) -> RunRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which.id());
    rng
}

/// Deterministic generator for an arbitrary sub-seed (e.g. an episode index).
pub fn seeded(seed: u64) -> RunRng {
    ChaCha8Rng::seed_from_u64(seed)
}

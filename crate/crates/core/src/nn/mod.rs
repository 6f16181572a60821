//! Dense tensors, a reverse-mode differentiable MLP and an Adam optimizer.
//!
//! Everything that learns in this crate (policy, critics, domain classifiers)
//! is an [`Mlp`] trained with [`Adam`].

mod adam;
mod matrix;
mod mlp;

pub use adam::{Adam, AdamConfig};
pub use matrix::Matrix;
pub use mlp::{Activation, Mlp, Tape};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NnError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("invalid network configuration: {0}")]
    Config(String),
}

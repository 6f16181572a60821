//! Dual action policies for off-dynamics reinforcement learning.
//!
//! An agent trains in a source simulator whose dynamics differ from the
//! target domain it is deployed in. The policy emits two actions per state:
//! `a_src` drives the simulator and `a_tgt` is the action to take in the
//! target domain. A pair of domain classifiers turns the dynamics mismatch
//! into a reward adjustment, and disagreement across an ensemble of them
//! scales exploration noise added to `a_src`.
//!
//! ```no_run
//! use dap::harness::ExperimentConfig;
//! use dap::trainer::{train, AlgoKind};
//!
//! let mut config = ExperimentConfig::default();
//! config.algo = AlgoKind::SacSource;
//! config.total_steps = 5_000;
//! let out = train(&config).unwrap();
//! println!("{}", out.metrics.last().unwrap().eval_return_mean);
//! ```

// `!(x > 0.0)` style checks deliberately reject NaN; index loops mirror the maths.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod classifier;
pub mod env;
pub mod harness;
pub mod nn;
pub mod rng;
pub mod robust;
pub mod sac;
pub mod trainer;

//! p-adic polynomial regression.
//!
//! Functions `Z_p^n -> Z_p` are approximated by a truncated Mahler series in a
//! single variable obtained by interleaving the base-p digits of the inputs.
//! Weights are fitted either by an exact linear solve over Q_p or by a
//! Metropolis random walk on a p-adic loss.

pub mod cli;
pub mod dataset;
pub mod embedding;
pub mod error;
pub mod mahler;
pub mod model;
pub mod padic;
mod rng;
pub mod training;

pub use error::{Error, Result};

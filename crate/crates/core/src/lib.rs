//! Counting microstates of dice and Einstein solids, and watching
//! near-deterministic macrostate behaviour emerge from random microscopic
//! moves.
//!
//! * [`exactmath`]: exact binomials and log-space factorials.
//! * [`process`]: deterministic / random / partially deterministic
//!   classification and long-run expectations.
//! * [`dice`]: macrostate tables for distinguishable dice.
//! * [`solids`]: Einstein solid multiplicities and coupled-solid distributions.
//! * [`montecarlo`]: the energy-exchange chain and its convergence checks.
//! * [`cli`]: the command-line front end and its output formats.

pub mod cli;
pub mod dice;
pub mod error;
pub mod exactmath;
pub mod montecarlo;
pub mod process;
pub mod solids;

pub use error::{Error, Result};

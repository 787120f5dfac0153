//! Solver and verifier for the zero-sum secrecy-rate game between a source
//! and a jammer relay that helps an eavesdropper.
//!
//! The pipeline runs [`channel`] (powers, corner points, case gate) into
//! [`payoff`] (rate regions, payoff, reduction to a square game), then
//! solves the square game in closed form ([`analytic`]) and on a grid by
//! linear programming ([`discrete`]). [`verify`] certifies either solution
//! with best-response oracles and simulates the variable-rate scheme.

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod discrete;
pub mod error;
pub mod payoff;
pub mod report;
pub mod strategy;
pub mod verify;

pub use error::{GameError, Result};

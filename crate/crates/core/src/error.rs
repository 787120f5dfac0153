use thiserror::Error;

use crate::channel::CaseReport;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid channel configuration: {0}")]
    InvalidConfig(String),

    #[error("corner-point ordering outside the supported case: {0}")]
    ConditionsViolated(CaseReport),

    #[error("degenerate game: edge length {edge} is not positive")]
    DegenerateGame { edge: f64 },

    #[error("skew parameter {skew} is at or above 1; no finite interval index exists")]
    SkewAtOne { skew: f64 },

    #[error("{function} is undefined at a = {skew}")]
    DomainError { function: &'static str, skew: f64 },

    #[error("no closed-form equilibrium for interval index k = {k}")]
    UnsupportedK { k: usize },

    #[error("equilibrium c.d.f. failed validation: {0}")]
    NormalizationFailure(String),

    #[error("matrix game solver failed: {0}")]
    SolverFailure(String),
}

pub type Result<T> = std::result::Result<T, GameError>;

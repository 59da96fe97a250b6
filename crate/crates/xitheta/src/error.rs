//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the numerical and algebraic layers.
#[derive(Error, Debug, Clone)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series truncation cannot reach the requested tolerance within the
    /// configured term cap. Carries the bound that is achievable.
    #[error("precision error: requested {requested:e}, achievable {achievable:e} with {terms} terms")]
    SeriesPrecision {
        requested: f64,
        achievable: f64,
        terms: usize,
    },

    /// Adaptive integration exhausted its panel budget. Carries the best
    /// estimate so callers can decide whether it is still usable.
    #[error("precision error: panel budget {panels} exhausted, best estimate {value:e} ± {err:e} (requested {requested:e})")]
    QuadBudget {
        value: f64,
        err: f64,
        panels: usize,
        requested: f64,
    },

    /// A moment table does not hold moments of high enough order.
    #[error("capacity error: operation needs moments up to j = {needed}, table has j_max = {have}")]
    Capacity { needed: u32, have: u32 },

    /// Exact polynomial algebra applied to an invalid input.
    #[error("polynomial error: {0}")]
    Poly(String),

    /// Cache I/O or format problems.
    #[error("cache error: {0}")]
    Cache(String),

    /// Invalid configuration.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

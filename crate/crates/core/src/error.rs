use thiserror::Error;

/// Errors raised by the model, the GDoF evaluators and the verification harness.
///
/// Cell and user indices in messages are 1-based, matching the profile document.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("network must contain at least one cell")]
    NoCells,

    #[error("strength exponent for (k={cell}, l={user}, i={from}) is negative: {value}")]
    NegativeAlpha {
        cell: usize,
        user: usize,
        from: usize,
        value: f64,
    },

    #[error("strength exponent for (k={cell}, l={user}, i={from}) is not finite: {value}")]
    NonFiniteAlpha {
        cell: usize,
        user: usize,
        from: usize,
        value: f64,
    },

    #[error("missing strength exponent for (k={cell}, l={user}, i={from})")]
    MissingAlpha {
        cell: usize,
        user: usize,
        from: usize,
    },

    #[error("{what}: expected length {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("power exponent for (k={cell}, l={user}) must be <= 0 or -inf, got {value}")]
    InvalidPowerExponent {
        cell: usize,
        user: usize,
        value: f64,
    },

    #[error("GDoF value for (k={cell}, l={user}) must be finite and >= 0, got {value}")]
    InvalidGdof {
        cell: usize,
        user: usize,
        value: f64,
    },

    #[error("invalid interval [{lo}, {hi}]: {reason}")]
    InvalidInterval {
        lo: f64,
        hi: f64,
        reason: &'static str,
    },

    #[error("invalid finite-power configuration: {0}")]
    InvalidPowerConfig(String),

    #[error(
        "IMAC power allocation violates the in-cell ordering in cell {cell}; \
         run normalize_imac_power first"
    )]
    ImacOrderingViolated { cell: usize },

    #[error("vertex enumeration supports at most 3 cells, got {0}")]
    UnsupportedSize(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("sweep of {required} samples exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("invalid channel coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed profile document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;

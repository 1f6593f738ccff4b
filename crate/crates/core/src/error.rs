use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum SfqError {
    /// A numeric argument is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation that needs at least one pulse received an empty train.
    #[error("pulse train is empty")]
    EmptyTrain,

    /// Pulse event times must be strictly increasing.
    #[error("pulse event times are not strictly increasing at index {index}: {prev} >= {next}")]
    NonMonotone { index: usize, prev: f64, next: f64 },

    /// A per-cycle rotation request cannot be realized by any pulse pair.
    #[error("unrealizable envelope: requested per-cycle strength {requested} exceeds maximum {max}")]
    Unrealizable { requested: f64, max: f64 },

    /// Requested phase offset violates the active phi range.
    #[error("phi out of range: {phi} not in ({lo}, {hi})")]
    PhiRange { phi: f64, lo: f64, hi: f64 },

    /// Sampling resolution is too coarse for the requested rendering/integration.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// No pulse count can realize the target rotation in the given cycle budget.
    #[error(
        "calibration infeasible: target angle {target_angle} cannot be reached with {n_cycles} \
         cycles; minimum feasible cycle count is {min_n}"
    )]
    CalibrationInfeasible {
        target_angle: f64,
        n_cycles: usize,
        min_n: usize,
    },

    /// Decay-curve fitting failed or the data cannot identify a decay rate.
    #[error("fit error: {0}")]
    Fit(String),

    /// A configuration value is structurally invalid.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SfqError>;

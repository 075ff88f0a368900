use thiserror::Error;

/// Errors raised by the model and its numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge within {max_subdivisions} subintervals (error estimate {estimate:e})")]
    NonConvergence {
        max_subdivisions: usize,
        estimate: f64,
    },

    #[error("invalid bracket [{lo}, {hi}]: endpoints must be finite with lo < hi")]
    BracketInvalid { lo: f64, hi: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid scan: {0}")]
    InvalidScan(String),

    #[error("eigenstate index {0} out of range 0..=3")]
    IndexOutOfRange(usize),

    #[error("wavepacket is not normalized: sum of |a|^2 = {0}")]
    NotNormalized(f64),

    #[error("degenerate wavepacket: {0}")]
    DegenerateSpec(String),

    #[error("invalid grid: {0}")]
    GridInvalid(String),

    #[error("unknown preset '{0}' (expected A, B, C or D)")]
    UnknownPreset(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

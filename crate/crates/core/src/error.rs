use thiserror::Error;

/// Errors raised by the exact and Monte Carlo operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bias must lie strictly inside (0, 1), got {0}")]
    InvalidBias(f64),
    #[error("noise level must lie in [0, 1], got {0}")]
    InvalidNoise(f64),
    #[error("{bits} bits exceeds the cap of {cap}")]
    TooManyBits { bits: usize, cap: usize },
    #[error("unknown function descriptor `{0}`")]
    UnknownDescriptor(String),
    #[error("malformed descriptor `{descriptor}`: {reason}")]
    BadDescriptor { descriptor: String, reason: String },
    #[error("truth table: {0}")]
    Table(String),
    #[error("function is not boolean-valued")]
    NotBoolean,
    #[error("function vanishes identically")]
    ZeroFunction,
    #[error("functions on {left} and {right} bits cannot be combined")]
    BitMismatch { left: usize, right: usize },
    #[error("two-scale pair needs 0 < p < r <= 1, got p = {p}, r = {r}")]
    ScaleOrder { p: f64, r: f64 },
    #[error("operation needs an outer bias r < 1")]
    OuterBiasOne,
    #[error("configurations live on different lattices")]
    LatticeMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

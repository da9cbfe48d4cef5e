use thiserror::Error;

/// Errors raised by the factorization library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constant term is zero (|a0| = {modulus:e})")]
    ZeroConstantTerm { modulus: f64 },

    #[error("exponential requires a zero constant term (|a0| = {modulus:e})")]
    NonzeroConstant { modulus: f64 },

    #[error("series is not supported on the requested half-line (coefficient at z^{index})")]
    WrongOrientation { index: i64 },

    #[error("grid of size {grid} cannot resolve a window of {width} coefficients")]
    GridTooSmall { grid: usize, width: usize },

    #[error("corner entry of the root subgroup product is not invertible")]
    NonInvertibleCorner,

    #[error("loop is not in the top stratum (condition estimate {condition:e})")]
    NotTopStratum { condition: f64 },

    #[error("constant factor has no triangular factorization (|g0_11| = {modulus:e})")]
    NoTriangularFactorization { modulus: f64 },

    #[error("loop is not unitary: chi formulas disagree by {discrepancy:e}")]
    NotUnitary { discrepancy: f64 },

    #[error("normalizing scalar is irrational at index {index}")]
    IrrationalNormalizer { index: usize },

    #[error("oracle mismatch at n = {n}: {lhs} != {rhs}")]
    MismatchAt { n: i64, lhs: String, rhs: String },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constant term must be zero, got {0}")]
    NonzeroConstant(Rational),

    #[error("constant term must be one, got {0}")]
    ConstantNotOne(Rational),

    #[error("series has zero constant term and has no reciprocal")]
    NotInvertible,

    #[error("linear coefficient is zero: no compositional inverse")]
    NotDelta,

    #[error("index {requested} exceeds truncation order {order}")]
    OrderExceeded { requested: usize, order: usize },

    #[error("substitution requires a unit linear coefficient, got {0}")]
    NonUnitLinear(Rational),

    #[error("log part has nonzero constant term {0}; B/p is not a power series")]
    LogPartConstant(Rational),

    #[error("outside the space of interpolating statistics: {0}")]
    NotNormalized(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("unknown catalog entry `{name}`; valid entries: {valid}")]
    UnknownEntry { name: String, valid: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("partial sum evaluates to zero")]
    ZeroEvaluation,

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e}, a = {a}, b = {b})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        a: f64,
        b: f64,
    },

    #[error("network: {0}")]
    Network(String),
}

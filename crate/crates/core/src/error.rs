use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("denominator vanishes at {witness} in the closed unit disk")]
    DenominatorVanishes { witness: Complex64 },

    #[error("invalid space parameters: {0}")]
    Space(String),

    #[error("non-finite integrand value at node {node}")]
    Evaluation { node: Complex64 },

    #[error("point {point} is not a zero (residual {residual:e})")]
    NotAZero { point: Complex64, residual: f64 },

    #[error("lower bound violated: |u| = {modulus:e} at {point}")]
    LowerBoundViolated { point: Complex64, modulus: f64 },

    #[error("zero of u - lambda on the unit circle near angle {angle}")]
    BoundaryZero { angle: f64 },

    #[error("outside theorem hypotheses: {theorem}")]
    OutsideHypotheses { theorem: String },

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("config error: {0}")]
    Config(String),
}

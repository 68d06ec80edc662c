use thiserror::Error;

/// Errors surfaced by game construction, solving, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid payoff matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid simplex vector: {0}")]
    InvalidSimplex(String),

    #[error("linear program did not converge within {0} pivots")]
    SolverStalled(usize),

    #[error("linear program is infeasible: {0}")]
    Infeasible(String),

    #[error("step size {mu} rejected: mu * max loss = {product} >= 1")]
    StepSizeTooLarge { mu: f64, product: f64 },

    #[error("step size schedule exhausted at round {0}")]
    ScheduleExhausted(u64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

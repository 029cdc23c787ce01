use thiserror::Error;

use crate::cycles::CycleCertificate;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("function `{name}` expects {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("directions {0} and {1} are linearly dependent")]
    DependentDirections(usize, usize),
    #[error("the point set contains a cycle")]
    CycleExists(Box<CycleCertificate>),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("image of the box is not a coordinate product (not an r-set)")]
    NotAnRSet,
    #[error("singular system")]
    Singular,
    #[error("evaluation failed at {0:?}")]
    Evaluation(Vec<f64>),
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("no convergence after {iters} iterations (last change {residual:e})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("requested accuracy not reached: best achieved {achieved:e}")]
    Accuracy { achieved: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

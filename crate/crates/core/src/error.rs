use thiserror::Error;

use crate::orbifold::Holonomy;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("isometry is not hyperbolic (trace {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("degenerate incidence: {0}")]
    DegenerateIncidence(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid necklace: {0}")]
    InvalidNecklace(String),
    #[error("construction failed: {0}")]
    ConstructionFailure(String),
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("tessellation error: {0}")]
    TessellationError(String),
    #[error("tile walk exceeded {budget} crossings")]
    DepthExceeded { budget: usize },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("domain check failed: {0}")]
    DomainCheckError(String),
    #[error("enumeration budget of {budget} tiles exceeded")]
    BudgetExceeded { budget: usize },
    #[error("necklace completion failed: {0}")]
    CompletionError(String),
    #[error("reduction did not converge after {iterations} iterations")]
    ReductionFailure {
        iterations: usize,
        best: Box<Holonomy>,
    },
    #[error("invalid bracelet: {0}")]
    InvalidBracelet(String),
}

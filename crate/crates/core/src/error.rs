use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Zero vector or other input that cannot be normalized.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A matrix or configuration violates a required structural property
    /// (unitarity, hermiticity, representability, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("rank-deficient design: {0}")]
    RankDeficient(String),

    #[error("post-selection failed: success probability {0:e} below 1e-12")]
    PostSelection(f64),

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("x = {x} lies outside the fitted range [{lo}, {hi}]")]
    Extrapolation { x: f64, lo: f64, hi: f64 },

    #[error("training diverged at epoch {epoch}: loss = {loss}")]
    Divergence { epoch: usize, loss: f64 },

    #[error("data error at line {line}: {message}")]
    Data { line: usize, message: String },
}

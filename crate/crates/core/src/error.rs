use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A non-finite value appeared while evaluating the document objective.
    #[error("non-finite objective at eta = {eta:?}")]
    NonFinite { eta: Vec<f64> },
    #[error("matrix is not positive definite after jitter repair")]
    NotPositiveDefinite,
    #[error("singular normal equations; use a ridge > 0")]
    SingularNormalEquations,
    #[error("topic {topic} has constant prevalence across documents")]
    ConstantTopic { topic: usize },
}

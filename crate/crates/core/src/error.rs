use thiserror::Error;

use crate::spectral::SpectralEstimate;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("vertex {0} out of range")]
    InvalidVertex(usize),

    #[error("window too large: more than {budget} vertices")]
    WindowTooLarge { budget: usize },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("insufficient margin: {0}")]
    InsufficientMargin(String),

    #[error("empty competitor: test function vanishes identically")]
    EmptyCompetitor,

    #[error("invalid test function: {0}")]
    InvalidFunction(String),

    #[error("no free vertex: every vertex is in the Dirichlet set")]
    NoFreeVertex,

    #[error("problem of size {size} exceeds the dense limit {limit}")]
    SizeOverflow { size: usize, limit: usize },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("exhaustion not converged: last trace delta {delta:.3e} above tolerance")]
    NotConverged {
        delta: f64,
        estimate: Box<SpectralEstimate>,
    },

    #[error("state budget of {budget} exceeded")]
    StateBudget { budget: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

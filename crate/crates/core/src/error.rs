use thiserror::Error;

use crate::graph::PathCoverViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {index}: loop at vertex {vertex}")]
    Loop { index: usize, vertex: usize },

    #[error("edge {index}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange {
        index: usize,
        vertex: usize,
        n: usize,
    },

    #[error("edge {index}: weight must be a positive integer")]
    ZeroWeight { index: usize },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid path cover: {0}")]
    InvalidPathCover(#[from] PathCoverViolation),

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("memory accounting: release of {requested} words with only {resident} resident")]
    Accounting { requested: u64, resident: u64 },

    #[error("memory budget exceeded: {resident} words resident, budget {budget}")]
    BudgetExceeded { resident: u64, budget: u64 },

    #[error("instance too large for exact oracle: {0}")]
    TooLarge(String),

    #[error("epsilon must be a fraction p/q (or integer) in (0, 1], got {0}")]
    Epsilon(String),

    #[error("a Hamiltonian cycle needs at least 3 vertices, got n = {0}")]
    TooFewVertices(usize),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("no feasible instance: {0}")]
    Infeasible(String),

    #[error("visitor aborted: {0}")]
    Aborted(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

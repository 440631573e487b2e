use relu_core::NetError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("expected a network with {expected} input(s) and one output, got {got_in} -> {got_out}")]
    Dimension { expected: usize, got_in: usize, got_out: usize },
    #[error("empty domain: {0}")]
    EmptyDomain(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("grid too coarse: a piece spans only {points} grid points (need at least {needed})")]
    Resolution { points: usize, needed: usize },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("more than {0} breakpoints")]
    TooManyPieces(usize),
    #[error(transparent)]
    Net(#[from] NetError),
}

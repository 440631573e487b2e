use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("network needs at least one layer")]
    Empty,
    #[error("input of length {got} given to a network with input dimension {expected}")]
    InputShape { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("depth mismatch: {0}")]
    Depth(String),
    #[error("non-finite weight in layer {layer}")]
    NonFinite { layer: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

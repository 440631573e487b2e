use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("{which} {value} exceeds eps^-k for k = {k}; the smallest admissible k is {minimal_k}")]
    Precondition { which: &'static str, value: String, k: u32, minimal_k: u32 },
    #[error("weight {value} in layer {layer} is not on the quantization grid")]
    OffGrid { layer: usize, value: f64 },
    #[error("lattice index of weight {value} in layer {layer} does not fit in {bits} bits")]
    Overflow { layer: usize, value: f64, bits: u64 },
    #[error("node {node} of layer {layer} is degenerate ({why})")]
    Degenerate { layer: usize, node: usize, why: &'static str },
    #[error("bit stream ended after {0} bits")]
    Truncated(usize),
    #[error("malformed code: {0}")]
    Malformed(String),
    #[error(transparent)]
    Net(#[from] relu_core::NetError),
}

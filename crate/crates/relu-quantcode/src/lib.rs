//! Quantization of network weights to the lattice `2^{-m⌈log2(1/ε)⌉} ℤ` and
//! a bit-exact encoder/decoder for the quantized networks.
//!
//! The code layout is
//!
//! 1. `M` ones and a zero (`M` = number of nonzero weights); `M = 0` is the
//!    single bit `0`;
//! 2. `L - 1` in `w_M = max(1, ⌈log2 M⌉)` bits;
//! 3. `N_0 - 1, ..., N_L - 1`, each in `w_M` bits;
//! 4. for every non-output node in layer-major order, the global indices
//!    (1-based) of its children in `w_N = ⌈log2(N+1)⌉` bits each, closed by
//!    an all-zero block;
//! 5. for every non-output node its bias (0 for inputs) followed by the
//!    weights of its outgoing edges, then the biases of the output nodes,
//!    each as the offset-binary lattice index in `B = 2(m⌈log2(1/ε)⌉ + 1)`
//!    bits.

mod bits;
mod codec;
mod error;
mod grid;

pub use bits::{BitReader, BitString};
pub use codec::{code_length_bound, decode, encode, weight_bits};
pub use error::QuantError;
pub use grid::{minimal_k, quantization_degree, quantize_network, QuantGrid};

pub type Result<T, E = QuantError> = std::result::Result<T, E>;

//! Feed-forward ReLU networks with explicit affine layers.
//!
//! A network `Φ = ((A_1, b_1), ..., (A_L, b_L))` realizes
//! `x ↦ A_L ρ(... ρ(A_1 x + b_1) ...) + b_L` with `ρ(t) = max(t, 0)` applied
//! between layers but never after the last one.
//!
//! Everything here is generic over the scalar type; the aliases at the crate
//! root fix it to `f64` (the working precision of the rest of the workspace)
//! or `f32`.

mod error;
mod layer;
mod metrics;
mod network;
mod scalar;

pub mod calculus;
pub mod format;

pub use error::NetError;
pub use layer::AffineLayer;
pub use metrics::NetworkMetrics;
pub use network::ReluNetwork;
pub use scalar::Scalar;

pub type Layer = AffineLayer<f64>;
pub type Network = ReluNetwork<f64>;
pub type Metrics = NetworkMetrics<f64>;

pub type Layer32 = AffineLayer<f32>;
pub type Network32 = ReluNetwork<f32>;
pub type Metrics32 = NetworkMetrics<f32>;

pub type Result<T, E = NetError> = std::result::Result<T, E>;

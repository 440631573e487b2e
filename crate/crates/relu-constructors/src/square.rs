//! `x ↦ x²` on `[0, 1]` by subtracting scaled sawtooth teeth from `x`.
//!
//! With `t_1 = x` and `t_{k+1} = t_k / 2 - ρ(t_k - 2^{-2k+1})` the values
//! `t_{k+1} = g_k(x) / 4^k` are produced by one layer each, and the
//! interpolant `I_m(x) = x - Σ_{k=1}^{m} g_k(x) / 4^k` is accumulated in a
//! third neuron. `I_m` is the piecewise linear interpolant of `x²` at the
//! nodes `j 2^{-m}`, so `0 ≤ I_m(x) - x² ≤ 2^{-2m-2}` with equality at the
//! midpoints between nodes.

use relu_core::{Layer, NetError, Network, Result};

use crate::check_eps;

/// Number of sawtooth terms used for tolerance `eps`:
/// `max(1, ⌈log2(1/eps) / 2⌉ - 1)`.
pub fn square_degree(eps: f64) -> usize {
    let m = ((1.0 / eps).log2() / 2.0).ceil() as i64 - 1;
    m.max(1) as usize
}

/// Network with `m` sawtooth terms: width 3, depth `m + 1`, weights in
/// `[-1, 1]`, and sup error exactly `2^{-2m-2}` on `[0, 1]`.
pub fn square_network_m(m: usize) -> Result<Network> {
    if m == 0 {
        return Err(NetError::Argument("square network needs m ≥ 1".into()));
    }
    let mut layers = vec![Layer::from_f64_rows(&[&[1.0], &[1.0], &[1.0]], &[0.0, -0.5, 0.0])?];
    for l in 2..=m as i32 {
        let c = -(2f64.powi(-2 * l + 1));
        layers.push(Layer::from_f64_rows(
            &[&[0.5, -1.0, 0.0], &[0.5, -1.0, 0.0], &[-0.5, 1.0, 1.0]],
            &[0.0, c, 0.0],
        )?);
    }
    layers.push(Layer::from_f64_rows(&[&[-0.5, 1.0, 1.0]], &[0.0])?);
    Network::new(layers)
}

/// `Φ_ε` with `‖Φ_ε - x²‖_{L∞[0,1]} ≤ eps` and `Φ_ε(0) = 0`.
pub fn square_network(eps: f64) -> Result<Network> {
    check_eps(eps)?;
    square_network_m(square_degree(eps))
}

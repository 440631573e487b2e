//! Oscillatory textures `cos(a g) h` and Weierstrass partial sums.

use std::f64::consts::PI;

use relu_core::calculus::{
    compose, identity_network, pad_to_common_depth, parallelize, parallelize_shared, postcompose_affine,
};
use relu_core::{Layer, NetError, Network, Result};

use crate::{ceil_log2, check_eps, cosine_network, multiply_network, smooth_network_general, SmoothDescriptor};

/// `x ↦ cos(a g(x)) h(x)` on the common interval of `g` and `h`.
///
/// `g` and `h` are approximated within `eps / (12⌈a⌉)`, the cosine on
/// `[-3/2, 3/2]` within `eps/3` and the product within `eps/3`. Both
/// descriptors are trusted to be bounded by one with derivatives bounded
/// by `n!`.
pub fn oscillatory_network(
    g: &SmoothDescriptor,
    h: &SmoothDescriptor,
    a: f64,
    d: f64,
    eps: f64,
) -> Result<Network> {
    check_eps(eps)?;
    if !(a > 0.0 && a.is_finite() && d > 0.0) {
        return Err(NetError::Argument(format!("need a > 0 and D > 0, got a = {a}, D = {d}")));
    }
    let (g, h) = (g.restrict(-d, d)?, h.restrict(-d, d)?);
    let tol = eps / (12.0 * a.ceil());
    let psi_g = smooth_network_general(&g, tol)?;
    let psi_h = smooth_network_general(&h, tol)?;
    let wave = compose(&cosine_network(a, 1.5, eps / 3.0)?, &psi_g)?;
    let pair = parallelize_shared(&pad_to_common_depth(&[wave, psi_h])?)?;
    compose(&multiply_network(1.5, eps / 3.0)?, &pair)
}

/// `N = ⌈log2(2/eps)⌉`; the partial sum keeps the terms `k = 0..=N`.
pub fn weierstrass_terms(eps: f64) -> usize {
    ceil_log2(2.0 / eps).max(0) as usize
}

/// The stages of [`weierstrass_network`] on `ℝ³`, each already followed by
/// the channel map `(x1, x2, x3) ↦ (x1, x1, x2 + x3)`.
///
/// The first stage takes one input and returns `(x, x, φ_0(x))`; stage `k`
/// maps `(x, x, s)` to `(x, x, s + p^k φ_k(x))` with `φ_k ≈ cos(a^k π ·)`
/// within `eps/4` on `[-D, D]`.
pub fn weierstrass_blocks(p: f64, a: f64, d: f64, eps: f64) -> Result<Vec<Network>> {
    check_eps(eps)?;
    if !(p > 0.0 && p < 0.5) {
        return Err(NetError::Argument(format!("p must lie in (0, 1/2), got {p}")));
    }
    if !(a > 0.0 && a.is_finite() && d > 0.0) {
        return Err(NetError::Argument(format!("need a > 0 and D > 0, got a = {a}, D = {d}")));
    }
    let n = weierstrass_terms(eps);
    let spread = Layer::from_f64_rows(&[&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0]], &[0.0; 3])?;
    let mut blocks = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let freq = a.powi(k as i32) * PI;
        let phi = cosine_network(freq, d, eps / 4.0)?;
        let phi = postcompose_affine(&Layer::from_f64_rows(&[&[p.powi(k as i32)]], &[0.0])?, &phi)?;
        let depth = phi.depth();
        let id = identity_network(1, depth);
        let block = if k == 0 {
            let zero = Network::from_layer(Layer::zeros(1, 1));
            parallelize_shared(&pad_to_common_depth(&[id, phi, zero])?)?
        } else {
            parallelize(&[id.clone(), phi, id])?
        };
        blocks.push(postcompose_affine(&spread, &block)?);
    }
    Ok(blocks)
}

/// `x ↦ Σ_{k=0}^{N} p^k cos(a^k π x)` on `[-D, D]`, within `eps` of the full
/// series: each term is approximated within `eps/4` and the tail is at most
/// `2^{-N} ≤ eps/2`.
pub fn weierstrass_network(p: f64, a: f64, d: f64, eps: f64) -> Result<Network> {
    let blocks = weierstrass_blocks(p, a, d, eps)?;
    let mut net = blocks[0].clone();
    for b in &blocks[1..] {
        net = compose(b, &net)?;
    }
    let out = Layer::from_f64_rows(&[&[0.0, 0.0, 1.0]], &[0.0])?;
    postcompose_affine(&out, &net)
}

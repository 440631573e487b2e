//! `x ↦ cos(a x)` on `[-D, D]`.
//!
//! After rescaling to `y = x / D` (for `D ≥ 1`) the frequency is `a' = a D`.
//! For `a' ≤ π` the function `(6/π³) cos(a' y)` is smooth enough for
//! [`smooth_network`] directly. For `a' > π` write `a' = π 2^s α` with
//! `α ∈ (1/2, 1]`; then `cos(a' y) = cos(π g_s(α |y|))` and only
//! `cos(π t)` on `t ∈ [0, 1]` has to be approximated, composed with a
//! weight-reduced sawtooth.

use std::f64::consts::PI;

use relu_core::calculus::{compose, concat_relu, precompose_affine, reduce_weights, scalar_mult_network};
use relu_core::{Layer, NetError, Network, Result};

use crate::{ceil_log2, check_eps, precompose_bounded, sawtooth_network, smooth_network, SmoothDescriptor};

const SCALE: f64 = 6.0 / (PI * PI * PI);

/// The two halves of [`cosine_network`]: `outer ∘ inner` approximates
/// `cos(a x)`.
///
/// For `aD` above `π` the inner network is `x ↦ g_s(α|x| / D)` with values in
/// `[0, 1]` and the outer one approximates `cos(π t)`; otherwise the inner
/// network is the single layer `x ↦ x / D` and the outer one approximates
/// `cos(aD y)` on `[-1, 1]`.
pub fn cosine_network_factors(a: f64, d: f64, eps: f64) -> Result<(Network, Network)> {
    check_eps(eps)?;
    if !(a > 0.0 && a.is_finite() && d > 0.0 && d.is_finite()) {
        return Err(NetError::Argument(format!("cosine needs a > 0 and D > 0, got a = {a}, D = {d}")));
    }
    let d_eff = d.max(1.0);
    let ap = a * d_eff;
    let scale_back = scalar_mult_network(1.0 / SCALE, 1);
    if ap <= PI {
        let f = SmoothDescriptor::new(move |y| SCALE * (ap * y).cos(), -1.0, 1.0, format!("cos({ap} y)"))?;
        let outer = compose(&scale_back, &smooth_network(&f, SCALE * eps)?)?;
        let inner = Network::from_layer(Layer::from_f64_rows(&[&[1.0 / d_eff]], &[0.0])?);
        return Ok((outer, inner));
    }
    let s = ceil_log2(ap / PI).max(1) as usize;
    let alpha = ap / (PI * 2f64.powi(s as i32));
    let abs_in = Layer::from_f64_rows(&[&[1.0 / d_eff], &[-1.0 / d_eff]], &[0.0, 0.0])?;
    let saw = reduce_weights(&sawtooth_network(s))?;
    // α(ρ(y) + ρ(-y)) = α|y| feeds the sawtooth
    let saw = precompose_affine(&saw, &Layer::from_f64_rows(&[&[alpha, alpha]], &[0.0])?)?;
    let inner = concat_relu(&saw, &Network::from_layer(abs_in))?;
    let f = SmoothDescriptor::new(|t| SCALE * (PI * t).cos(), -1.0, 1.0, "cos(pi t)")?;
    let outer = compose(&scale_back, &smooth_network(&f, SCALE * eps)?)?;
    Ok((outer, inner))
}

/// `Ψ_{a,D,ε}` with `|Ψ(x) - cos(a x)| ≤ eps` on `[-D, D]`, width at most 9
/// and weights in `[-1, 1]`.
pub fn cosine_network(a: f64, d: f64, eps: f64) -> Result<Network> {
    let (outer, inner) = cosine_network_factors(a, d, eps)?;
    if inner.depth() == 1 {
        precompose_affine(&outer, inner.first())
    } else {
        compose(&outer, &inner)
    }
}

/// `cos(a x - b)` on `[-D, D]`, as `Ψ_{a, D + |b|/a, ε}(x - b/a)`.
pub fn cosine_shifted_network(a: f64, b: f64, d: f64, eps: f64) -> Result<Network> {
    if !(a > 0.0 && b.is_finite()) {
        return Err(NetError::Argument(format!("shifted cosine needs a > 0 and finite b, got a = {a}, b = {b}")));
    }
    let net = cosine_network(a, d + b.abs() / a, eps)?;
    if b == 0.0 {
        return Ok(net);
    }
    precompose_bounded(&net, &Layer::from_f64_rows(&[&[1.0]], &[-b / a])?)
}

/// `sin(a x) = cos(a x - π/2)` on `[-D, D]`.
pub fn sine_network(a: f64, d: f64, eps: f64) -> Result<Network> {
    cosine_shifted_network(a, PI / 2.0, d, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_frequency() {
        let net = cosine_network(1.0, 1.0, 1e-3).unwrap();
        assert!((net.eval1(0.0) - 1.0).abs() <= 1e-3);
        assert!((net.eval1(0.7) - 0.7f64.cos()).abs() <= 1e-3);
    }

    #[test]
    fn factors_compose_to_the_network() {
        let (outer, inner) = cosine_network_factors(40.0, 1.0, 1e-2).unwrap();
        let full = cosine_network(40.0, 1.0, 1e-2).unwrap();
        for i in 0..=50 {
            let x = -1.0 + 0.04 * i as f64;
            assert_eq!(full.eval1(x), outer.eval1(inner.eval1(x)));
        }
    }
}

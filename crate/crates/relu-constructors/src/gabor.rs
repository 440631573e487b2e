//! Cutoff windows, modulation and the Gaussian.

use std::f64::consts::PI;

use relu_core::calculus::{
    compose, concat_relu, linear_combination_shared, pad_to_common_depth, parallelize_shared, postcompose_affine,
    reduce_weights,
};
use relu_core::{Layer, NetError, Network, Result};

use crate::{
    check_eps, cosine_network, cosine_shifted_network, multiply_network, precompose_bounded, smooth_network_general,
    SmoothDescriptor,
};

/// Network equal to 1 on `[-y, y]^d`, 0 outside `[-y-1, y+1]^d` and in
/// `[0, 1]` in between.
///
/// Each coordinate contributes `α(t) = ρ(1 - ρ(-t-y) - ρ(t-y))` and the
/// output is `ρ(Σ α_i - (d-1))`, followed by an identity layer so the outer
/// ReLU is applied. Both plateaus come out exactly. Depth 4 before weight
/// reduction.
pub fn cutoff_network(y: f64, d: usize) -> Result<Network> {
    if !(y > 0.0 && y.is_finite()) || d == 0 {
        return Err(NetError::Argument(format!("cutoff needs y > 0 and d >= 1, got y = {y}, d = {d}")));
    }
    let mut w1 = vec![0.0; 2 * d * d];
    for i in 0..d {
        w1[2 * i * d + i] = -1.0;
        w1[(2 * i + 1) * d + i] = 1.0;
    }
    let l1 = Layer::new(2 * d, d, w1, vec![-y; 2 * d])?;
    let mut w2 = vec![0.0; 2 * d * d];
    for i in 0..d {
        w2[i * 2 * d + 2 * i] = -1.0;
        w2[i * 2 * d + 2 * i + 1] = -1.0;
    }
    let l2 = Layer::new(d, 2 * d, w2, vec![1.0; d])?;
    let l3 = Layer::new(1, d, vec![1.0; d], vec![-(d as f64 - 1.0)])?;
    let net = Network::new(vec![l1, l2, l3, Layer::identity(1)])?;
    reduce_weights(&net)
}

/// Half-width of the flat part of the cutoff used by [`gaussian_network`]:
/// `max(log2(1/eps), sqrt(ln(8/eps)))`.
pub fn gaussian_cutoff_radius(eps: f64) -> f64 {
    (1.0 / eps).log2().max((8.0 / eps).ln().sqrt())
}

/// `e^{-|x|²}` on `ℝ^d` within `eps` everywhere, exactly 0 outside
/// `[-R-1, R+1]^d` with `R` from [`gaussian_cutoff_radius`].
///
/// The sum of squares is computed with product networks on `[-R-1, R+1]`,
/// clamped to `[0, ln(8/eps)]`, fed to a stitched approximation of `e^{-y}`
/// and finally multiplied with the cutoff window.
pub fn gaussian_network(d: usize, eps: f64) -> Result<Network> {
    check_eps(eps)?;
    if d == 0 {
        return Err(NetError::Argument("dimension must be positive".into()));
    }
    let r = gaussian_cutoff_radius(eps);
    let ymax = (8.0 / eps).ln();
    let sq = multiply_network(r + 1.0, eps / (8.0 * d as f64))?;
    let mut squares = Vec::with_capacity(d);
    for i in 0..d {
        let mut w = vec![0.0; 2 * d];
        w[i] = 1.0;
        w[d + i] = 1.0;
        squares.push(precompose_bounded(&sq, &Layer::new(2, d, w, vec![0.0; 2])?)?);
    }
    let sumsq = linear_combination_shared(&pad_to_common_depth(&squares)?, &vec![1.0; d])?;
    // (ρ(s/Y), ρ(s/Y - 1)) so that Y(first - second) clamps s to [0, Y]
    let clamp = Layer::from_f64_rows(&[&[1.0 / ymax], &[1.0 / ymax]], &[0.0, -1.0])?;
    let sumsq = postcompose_affine(&clamp, &sumsq)?;
    let exp = SmoothDescriptor::new(|y| (-y).exp(), 0.0, ymax, "exp(-y)")?;
    let exp_net = smooth_network_general(&exp, eps / 4.0)?;
    let exp_net = precompose_bounded(&exp_net, &Layer::from_f64_rows(&[&[ymax, -ymax]], &[0.0])?)?;
    let tilde = concat_relu(&exp_net, &sumsq)?;
    let window = cutoff_network(r, d)?;
    let pair = parallelize_shared(&pad_to_common_depth(&[tilde, window])?)?;
    compose(&multiply_network(1.0 + eps / 2.0, eps / 4.0)?, &pair)
}

/// Real and imaginary parts of `t ↦ e^{2πi⟨ξ,t⟩} f(t)` on `[-D, D]^d`, given
/// a network `gnet` for `f` with error at most `eps` there and
/// `s_f = max(1, sup|f|)`.
///
/// The phase is rescaled by `c = max(1, |ξ|_∞)` so the cosine stage sees
/// `cos(2πc z)` with `z = ⟨ξ,t⟩/c`. Each part is within `3 eps / 2`.
/// `ξ = 0` returns `gnet` itself and the zero map.
pub fn modulated_network(gnet: &Network, s_f: f64, xi: &[f64], d: f64, eps: f64) -> Result<(Network, Network)> {
    check_eps(eps)?;
    let dim = gnet.in_dim();
    if xi.len() != dim || gnet.out_dim() != 1 {
        return Err(NetError::Dimension(format!(
            "frequency has {} entries, generator takes {dim} inputs and returns {}",
            xi.len(),
            gnet.out_dim()
        )));
    }
    if !(s_f >= 1.0 && d > 0.0) {
        return Err(NetError::Argument(format!("need S_f >= 1 and D > 0, got S_f = {s_f}, D = {d}")));
    }
    if xi.iter().all(|&v| v == 0.0) {
        return Ok((gnet.clone(), Network::from_layer(Layer::zeros(1, dim))));
    }
    let c = xi.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let extent = d * xi.iter().map(|v| v.abs()).sum::<f64>() / c;
    let phase = Layer::new(1, dim, xi.iter().map(|v| v / c).collect(), vec![0.0])?;
    let tol = eps / (6.0 * s_f);
    let re_c = precompose_bounded(&cosine_network(2.0 * PI * c, extent, tol)?, &phase)?;
    let im_c = precompose_bounded(&cosine_shifted_network(2.0 * PI * c, PI / 2.0, extent, tol)?, &phase)?;
    let mu = multiply_network(s_f + 0.5, eps / 6.0)?;
    let part = |wave: Network| -> Result<Network> {
        compose(&mu, &parallelize_shared(&pad_to_common_depth(&[wave, gnet.clone()])?)?)
    };
    Ok((part(re_c)?, part(im_c)?))
}

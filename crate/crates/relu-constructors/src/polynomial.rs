//! `x ↦ Σ a_i x^i` on `[-D, D]`.
//!
//! The monomials are produced by repeated multiplication,
//! `f_{k+1} = Φ_{B_k,η}(x, f_k)`, while a parallel channel accumulates the
//! partial sum. The state between blocks is `(x, s, y)` with
//! `s = Σ_{i<k} a_i f_i` and `y = f_k`. Block `k` runs
//!
//! ```text
//! (x, s, y) → (x, s, y, y) → (x, s + a_k y, y) → (x, s + a_k y, x, y)
//!           → (x, s + a_k y, Φ_{B_k,η}(x, y))
//! ```
//!
//! where the copying maps are folded into the first layer of the following
//! network.

use relu_core::calculus::{affine_network, compose, pad_to_common_depth, parallelize};
use relu_core::{Layer, NetError, Network, Result};

use crate::{check_eps, multiply_network};

fn identity(depth: usize) -> Network {
    relu_core::calculus::identity_network(1, depth)
}

/// `η = eps / (‖a‖∞ (m - 1)² ⌈D⌉^{m-2})` for degree `m ≥ 2`, with the norm
/// replaced by 1 for the zero polynomial.
pub fn polynomial_eta(a: &[f64], d: f64, eps: f64) -> f64 {
    let m = a.len() - 1;
    let norm = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let norm = if norm > 0.0 { norm } else { 1.0 };
    let cd = d.max(1.0).ceil();
    eps / (norm * ((m - 1) * (m - 1)) as f64 * cd.powi(m as i32 - 2))
}

fn block(ak: f64, bk: f64, eta: f64) -> Result<Network> {
    // (II) with (I) folded in: (x, s, y) ↦ (x, s + a_k y, y)
    let acc = affine_network(&Layer::from_f64_rows(&[&[1.0, ak]], &[0.0])?);
    let mid = pad_to_common_depth(&[identity(1), acc, identity(1)])?;
    let mut two = parallelize(&mid)?.into_layers();
    let dup_y = Layer::from_f64_rows(
        &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]],
        &[0.0; 4],
    )?;
    two[0] = dup_y.then(&two[0])?;
    let two = Network::new(two)?;

    // (IV) with (III) folded in: (x, s, y) ↦ (x, s, Φ(x, y))
    let mult = multiply_network(bk, eta)?;
    let four = pad_to_common_depth(&[identity(1), identity(1), mult])?;
    let mut four = parallelize(&four)?.into_layers();
    let dup_x = Layer::from_f64_rows(
        &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]],
        &[0.0; 4],
    )?;
    four[0] = dup_x.then(&four[0])?;
    compose(&Network::new(four)?, &two)
}

/// `Φ_{a,D,ε}` with `|Φ(x) - Σ a_i x^i| ≤ eps` on `[-D, D]`, width at most
/// 9 and weights in `[-1, 1]`.
///
/// Degree 0 and 1 are exact affine networks.
pub fn polynomial_network(a: &[f64], d: f64, eps: f64) -> Result<Network> {
    check_eps(eps)?;
    if a.is_empty() {
        return Err(NetError::Argument("polynomial needs at least one coefficient".into()));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(NetError::Argument("polynomial coefficients must be finite".into()));
    }
    let m = a.len() - 1;
    if m <= 1 {
        let slope = if m == 1 { a[1] } else { 0.0 };
        return Ok(affine_network(&Layer::from_f64_rows(&[&[slope]], &[a[0]])?));
    }
    let d = d.max(1.0);
    let cd = d.ceil();
    let eta = polynomial_eta(a, d, eps);
    let b = |k: usize| -> f64 {
        let tail: f64 = (0..k.saturating_sub(1)).map(|s| cd.powi(s as i32)).sum();
        cd.powi(k as i32) + eta * tail
    };
    // x ↦ (x, a_0, x)
    let mut net = affine_network(&Layer::from_f64_rows(&[&[1.0], &[0.0], &[1.0]], &[0.0, a[0], 0.0])?);
    for (k, &ak) in a.iter().enumerate().take(m).skip(1) {
        net = compose(&block(ak, b(k), eta)?, &net)?;
    }
    // (x, s, y) ↦ s + a_m y
    let last = affine_network(&Layer::from_f64_rows(&[&[0.0, 1.0, a[m]]], &[0.0])?);
    compose(&last, &net)
}

//! `(x, y) ↦ xy` on `[-D, D]²` through `xy = D² (u² - v²)` with
//! `u = |x + y| / 2D` and `v = |x - y| / 2D`.
//!
//! Both squares run the sawtooth recursion of [`square_network_m`]
//! side by side. Neuron order inside each hidden layer is
//! `[t(u), t(v), r(u), r(v), acc]`, where `t` carries the current scaled
//! tooth, `r` its folded half and `acc = I(u) - I(v) + 1` the running
//! difference. The offset keeps `acc` nonnegative so the ReLU between layers
//! never clips it; it is removed in the output layer.
//!
//! [`square_network_m`]: crate::square_network_m

use relu_core::calculus::{compose, scalar_mult_network};
use relu_core::{Layer, Network, Result};

use crate::check_eps;

/// `⌈(1 + log2(D²/eps)) / 2⌉` with `D` clamped below at 1.
pub fn multiply_degree(d: f64, eps: f64) -> usize {
    let d = d.max(1.0);
    let m = ((1.0 + (d * d / eps).log2()) / 2.0).ceil();
    (m as usize).max(1)
}

fn core_network(d: f64, m: usize) -> Result<Network> {
    let a = 1.0 / (2.0 * d);
    let mut layers = vec![Layer::from_f64_rows(&[&[a, a], &[-a, -a], &[a, -a], &[-a, a]], &[0.0; 4])?];
    layers.push(Layer::from_f64_rows(
        &[
            &[1.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 1.0],
            &[1.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 1.0],
            &[1.0, 1.0, -1.0, -1.0],
        ],
        &[0.0, 0.0, -0.5, -0.5, 1.0],
    )?);
    for l in 3..=(m as i32 + 1) {
        let c = -(2f64.powi(-2 * l + 3));
        layers.push(Layer::from_f64_rows(
            &[
                &[0.5, 0.0, -1.0, 0.0, 0.0],
                &[0.0, 0.5, 0.0, -1.0, 0.0],
                &[0.5, 0.0, -1.0, 0.0, 0.0],
                &[0.0, 0.5, 0.0, -1.0, 0.0],
                &[-0.5, 0.5, 1.0, -1.0, 1.0],
            ],
            &[0.0, 0.0, c, c, 0.0],
        )?);
    }
    layers.push(Layer::from_f64_rows(&[&[-0.5, 0.5, 1.0, -1.0, 1.0]], &[-1.0])?);
    Network::new(layers)
}

/// `Φ_{D,ε}` with `|Φ(x, y) - xy| ≤ eps` on `[-D, D]²`, width 5, weights in
/// `[-1, 1]`, and `Φ(0, y) = Φ(x, 0) = 0` exactly.
///
/// Depth is `m + 2` plus the depth of the multiplication by `D²` (absent for
/// `D ≤ 1`), where `m =` [`multiply_degree`]`(D, eps)`.
pub fn multiply_network(d: f64, eps: f64) -> Result<Network> {
    check_eps(eps)?;
    let d = if d.is_finite() && d > 1.0 { d } else { 1.0 };
    let net = core_network(d, multiply_degree(d, eps))?;
    let d2 = d * d;
    if d2 == 1.0 {
        Ok(net)
    } else {
        compose(&scalar_mult_network(d2, 1), &net)
    }
}

//! Explicit approximating networks.
//!
//! Every constructor returns a plain [`Network`] whose weights are bounded by
//! one in magnitude unless its docs say otherwise. Error tolerances are
//! sup-norm bounds on the stated domain, valid in exact arithmetic; binary64
//! rounding adds a few ulps of the output scale on top.

mod cosine;
mod gabor;
mod haar;
mod multiply;
mod polynomial;
mod sawtooth;
mod smooth;
mod spline;
mod square;
mod textures;

pub use cosine::{cosine_network, cosine_network_factors, cosine_shifted_network, sine_network};
pub use gabor::{cutoff_network, gaussian_cutoff_radius, gaussian_network, modulated_network};
pub use haar::{haar_element_network, haar_mother};
pub use multiply::{multiply_degree, multiply_network};
pub use polynomial::{polynomial_eta, polynomial_network};
pub use sawtooth::{hat_network, sawtooth_network, sawtooth_value};
pub use smooth::{
    chebyshev_expand, hat_partition, smooth_degree, smooth_network, smooth_network_general, stitch_networks,
    ChebyshevExpansion, SmoothDescriptor, MAX_CHEBYSHEV_DEGREE, WARN_CHEBYSHEV_DEGREE,
};
pub use spline::{
    bspline_network, bspline_value, dilate_translate, spline_wavelet_coeffs, spline_wavelet_network,
    spline_wavelet_value,
};
pub use square::{square_degree, square_network, square_network_m};
pub use textures::{weierstrass_blocks, weierstrass_network, weierstrass_terms, oscillatory_network};

use relu_core::calculus::{affine_network, compose};
use relu_core::{Layer, NetError, Network, Result};

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(NetError::Argument(format!("eps must lie in (0, 1/2), got {eps}")))
    }
}

/// `net ∘ map`, merging `map` into the first layer when that keeps every
/// weight within `max(1, B(net))`, and composing with a weight-bounded
/// affine network otherwise.
pub fn precompose_bounded(net: &Network, map: &Layer) -> Result<Network> {
    let bound = net.metrics().weight_magnitude.max(1.0);
    let merged = map.then(net.first())?;
    if merged.max_abs() <= bound {
        let mut layers = net.layers().to_vec();
        layers[0] = merged;
        Network::new(layers)
    } else {
        compose(net, &affine_network(map))
    }
}

/// `⌈log2 x⌉` for `x ≥ 1`, exact on powers of two.
pub(crate) fn ceil_log2(x: f64) -> i32 {
    let k = x.log2().ceil() as i32;
    // guard against log2 rounding on exact powers of two and their neighbours
    if k > 0 && 2f64.powi(k - 1) >= x {
        k - 1
    } else if 2f64.powi(k) < x {
        k + 1
    } else {
        k
    }
}

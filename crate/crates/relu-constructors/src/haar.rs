//! Haar wavelet elements `ψ_{n,k}(x) = 2^{n/2} ψ(2^n x - k)`.

use relu_core::{Layer, NetError, Network, Result};

use crate::check_eps;

/// The Haar mother wavelet: 1 on `[0, 1/2)`, -1 on `[1/2, 1)`, 0 elsewhere.
pub fn haar_mother(x: f64) -> f64 {
    if (0.0..0.5).contains(&x) {
        1.0
    } else if (0.5..1.0).contains(&x) {
        -1.0
    } else {
        0.0
    }
}

/// One hidden layer of six ReLUs realizing `2^{n/2} Ψ_δ(2^n x - k)` with
/// `δ = eps²`, where `Ψ_δ` replaces each jump of `ψ` by a linear ramp of
/// width `2δ`.
///
/// Connectivity is 18. The weights are not bounded by one: the ramps need
/// slopes `1/δ` (times `2^{n/2}`) in the output layer. The `L²(ℝ)` error
/// is `sqrt(δ) = eps`.
pub fn haar_element_network(n: u32, k: u64, eps: f64) -> Result<Network> {
    check_eps(eps)?;
    if n > 60 || k >= 1u64 << n {
        return Err(NetError::Argument(format!("need 0 <= k < 2^n, got n = {n}, k = {k}")));
    }
    let delta = eps * eps;
    let scale = 2f64.powi(n as i32);
    let kf = k as f64;
    let shifts = [-delta, delta, 0.5 - delta, 0.5 + delta, 1.0 - delta, 1.0 + delta];
    let rows: Vec<[f64; 1]> = shifts.iter().map(|_| [scale]).collect();
    let row_refs: Vec<&[f64]> = rows.iter().map(|r| &r[..]).collect();
    let bias: Vec<f64> = shifts.iter().map(|s| -kf - s).collect();
    let amp = scale.sqrt();
    let h = amp / (2.0 * delta);
    let out = [h, -h, -2.0 * h, 2.0 * h, h, -h];
    Network::new(vec![
        Layer::from_f64_rows(&row_refs, &bias)?,
        Layer::from_f64_rows(&[&out], &[0.0])?,
    ])
}

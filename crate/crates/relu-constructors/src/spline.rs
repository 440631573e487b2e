//! Cardinal B-splines `N_m`, the associated spline wavelets `ψ_m`, and the
//! affine change of variables `x ↦ |det A|^{1/p} f(Ax - e)`.

use relu_core::calculus::{
    compose, concat_relu, linear_combination_shared, pad_to_common_depth, parallelize_shared, reduce_weights,
    sum_finite_width,
};
use relu_core::{Layer, NetError, Network, Result};

use crate::{check_eps, multiply_network, polynomial_network};

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `N_m(x)` from the truncated-power formula
/// `N_m(x) = 1/(m-1)! Σ_{k=0}^{m} (-1)^k C(m,k) (x-k)_+^{m-1}`.
///
/// `N_1` is the indicator of `[0, 1)`.
pub fn bspline_value(m: usize, x: f64) -> f64 {
    assert!(m >= 1, "B-spline order must be positive");
    if m == 1 {
        return if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
    }
    if x <= 0.0 || x >= m as f64 {
        return 0.0;
    }
    let mut s = 0.0;
    for k in 0..=m {
        let t = x - k as f64;
        if t <= 0.0 {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * binom(m, k) * t.powi(m as i32 - 1);
    }
    s / factorial(m - 1)
}

/// Network for `N_m` with sup error at most `eps` on all of ℝ (for `m ≥ 2`).
///
/// The truncated powers are approximated on `[-1, m+1]` by polynomial
/// networks in `u = ρ((x-k)/(m+1)) ∈ [0, 1]` and the sum is multiplied by the
/// piecewise linear window `Γ`, which is 1 on `[0, m]` and 0 off `[-1, m+1]`.
/// For `m = 1` the indicator is replaced by linear ramps of width `2 eps²`
/// around the jumps; outside those two windows the output is exact.
pub fn bspline_network(m: usize, eps: f64) -> Result<Network> {
    check_eps(eps)?;
    if m == 0 {
        return Err(NetError::Argument("B-spline order must be positive".into()));
    }
    if m == 1 {
        let d = eps * eps;
        let h = 1.0 / (2.0 * d);
        let ramp = Network::new(vec![
            Layer::from_f64_rows(&[&[1.0], &[1.0], &[1.0], &[1.0]], &[d, -d, d - 1.0, -1.0 - d])?,
            Layer::from_f64_rows(&[&[h, -h, -h, h]], &[0.0])?,
        ])?;
        return reduce_weights(&ramp);
    }
    let mf = m as f64;
    let branch_eps = eps / (2.0 * (mf + 1.0));
    let mut branches = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * binom(m, k) / factorial(m - 1);
        let mut coeffs = vec![0.0; m];
        coeffs[m - 1] = w * (mf + 1.0).powi(m as i32 - 1);
        let poly = polynomial_network(&coeffs, 1.0, branch_eps)?;
        let u = Network::from_layer(Layer::from_f64_rows(&[&[1.0 / (mf + 1.0)]], &[-(k as f64) / (mf + 1.0)])?);
        branches.push(concat_relu(&poly, &u)?);
    }
    let tilde = sum_finite_width(&pad_to_common_depth(&branches)?)?;
    let gamma = Network::new(vec![
        Layer::from_f64_rows(&[&[1.0], &[1.0], &[1.0], &[1.0]], &[1.0, 0.0, -mf, -mf - 1.0])?,
        Layer::from_f64_rows(&[&[1.0, -1.0, -1.0, 1.0]], &[0.0])?,
    ])?;
    let gamma = reduce_weights(&gamma)?;
    let pair = parallelize_shared(&pad_to_common_depth(&[tilde, gamma])?)?;
    compose(&multiply_network(1.0 + eps / 2.0, eps / 2.0)?, &pair)
}

/// `q_1, ..., q_{3m-1}` with
/// `q_n = (-1)^{n+1} / 2^{m-1} Σ_{j=0}^{m} C(m,j) N_{2m}(n-j)`.
pub fn spline_wavelet_coeffs(m: usize) -> Vec<f64> {
    assert!(m >= 1, "spline order must be positive");
    let scale = 2f64.powi(m as i32 - 1);
    (1..=3 * m - 1)
        .map(|n| {
            let s: f64 = (0..=m).map(|j| binom(m, j) * bspline_value(2 * m, n as f64 - j as f64)).sum();
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * s / scale
        })
        .collect()
}

/// `ψ_m(x) = Σ_n q_n N_m(2x - n + 1)`.
pub fn spline_wavelet_value(m: usize, x: f64) -> f64 {
    spline_wavelet_coeffs(m)
        .iter()
        .enumerate()
        .map(|(i, q)| q * bspline_value(m, 2.0 * x - i as f64))
        .sum()
}

/// Network for `ψ_m`: a shared-input linear combination of
/// `x ↦ N_m(2x - n + 1)` networks, each built at tolerance `eps / Σ|q_n|`.
///
/// The output layer carries the coefficients `q_n`, so the weight magnitude
/// is `max(1, max |q_n|)`.
pub fn spline_wavelet_network(m: usize, eps: f64) -> Result<Network> {
    check_eps(eps)?;
    if m == 0 {
        return Err(NetError::Argument("spline order must be positive".into()));
    }
    let q = spline_wavelet_coeffs(m);
    let eta = eps / q.iter().map(|c| c.abs()).sum::<f64>();
    let base = |_d: f64, tol: f64| bspline_network(m, tol);
    let extent = (2 * m) as f64;
    let mut nets = Vec::with_capacity(q.len());
    for n in 0..q.len() {
        nets.push(dilate_translate(&base, &[vec![2.0]], &[n as f64], f64::INFINITY, extent, eta)?);
    }
    linear_combination_shared(&pad_to_common_depth(&nets)?, &q)
}

fn abs_det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        m.swap(c, p);
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det.abs()
}

/// `W' ∘ Φ ∘ W` with `W(x) = Ax - e` and `W'(y) = |det A|^{1/p} y`, where
/// `Φ = base(F, η')` is built on `[-F, F]^d` for `F = d E ‖A‖_∞ + ‖e‖_∞`.
///
/// `base(D, tol)` must return a network approximating `f` within `tol` on
/// `[-D, D]^d`. It is called with `η' = eta / max(1, |det A|^{1/p})`, so the
/// result approximates `|det A|^{1/p} f(A· - e)` within `eta` on `[-E, E]^d`.
/// `p = ∞` means no amplitude factor.
pub fn dilate_translate(
    base: &dyn Fn(f64, f64) -> Result<Network>,
    a: &[Vec<f64>],
    e: &[f64],
    p: f64,
    big_e: f64,
    eta: f64,
) -> Result<Network> {
    let d = e.len();
    if d == 0 || a.len() != d || a.iter().any(|r| r.len() != d) {
        return Err(NetError::Dimension(format!("A must be {d}x{d} to match the shift")));
    }
    if !(p >= 1.0) || !(big_e > 0.0) || !(eta > 0.0) {
        return Err(NetError::Argument(format!("need p >= 1, E > 0, eta > 0; got p = {p}, E = {big_e}, eta = {eta}")));
    }
    let det = abs_det(a);
    if !(det > 1e-12) {
        return Err(NetError::Argument(format!("A is singular (|det A| = {det:e})")));
    }
    let a_inf = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let e_inf = e.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let f = d as f64 * big_e * a_inf + e_inf;
    let amp = if p.is_infinite() { 1.0 } else { det.powf(1.0 / p) };
    let phi = base(f, eta / amp.max(1.0))?;
    if phi.in_dim() != d {
        return Err(NetError::Dimension(format!("base network takes {} inputs, expected {d}", phi.in_dim())));
    }
    let rows: Vec<&[f64]> = a.iter().map(|r| &r[..]).collect();
    let shift: Vec<f64> = e.iter().map(|v| -v).collect();
    let w = Network::from_layer(Layer::from_f64_rows(&rows, &shift)?);
    let inner = compose(&phi, &w)?;
    if amp == 1.0 {
        return Ok(inner);
    }
    let k = phi.out_dim();
    let w2 = Network::from_layer(Layer::scaled_identity(k, amp));
    compose(&w2, &inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_spline_values() {
        assert_eq!(bspline_value(2, 1.0), 1.0);
        assert_eq!(bspline_value(2, 0.5), 0.5);
        assert_eq!(bspline_value(3, 1.5), 0.75);
        assert_eq!(bspline_value(3, -0.5), 0.0);
    }

    #[test]
    fn haar_coefficients() {
        assert_eq!(spline_wavelet_coeffs(1), vec![1.0, -1.0]);
        assert_eq!(spline_wavelet_coeffs(3).len(), 8);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let base = |_d: f64, t: f64| bspline_network(2, t);
        assert!(dilate_translate(&base, &[vec![0.0]], &[0.0], 2.0, 1.0, 0.1).is_err());
    }
}

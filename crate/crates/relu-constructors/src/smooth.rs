//! Smooth functions with factorially bounded derivatives.
//!
//! A function `f` on `[a, b]` belongs to the smooth class when
//! `|f^{(n)}| ≤ n!` on `[a, b]` for every `n ≥ 0`. Membership cannot be
//! checked mechanically; callers vouch for it, and the Chebyshev
//! coefficient bound is used as a sanity check.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use relu_core::calculus::{affine_network, compose, pad_to_common_depth, parallelize_shared, reduce_weights, sum_finite_width};
use relu_core::{Layer, NetError, Network, Result};

use crate::{check_eps, multiply_network, polynomial_network};

pub const MAX_CHEBYSHEV_DEGREE: usize = 40;
/// Above this degree the monomial coefficients lose enough digits in
/// binary64 that results should be treated with suspicion.
pub const WARN_CHEBYSHEV_DEGREE: usize = 25;

const COEFF_GUARD: f64 = 2.0 + 1e-6;

/// A real function on a closed interval, trusted to lie in the smooth class.
#[derive(Clone)]
pub struct SmoothDescriptor {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    a: f64,
    b: f64,
    label: String,
}

impl fmt::Debug for SmoothDescriptor {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "SmoothDescriptor({} on [{}, {}])", self.label, self.a, self.b)
    }
}

impl SmoothDescriptor {
    /// Checks `a < b` and that `f` is finite on 1001 equispaced samples.
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, a: f64, b: f64, label: impl Into<String>) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(NetError::Argument(format!("interval [{a}, {b}] is empty or unbounded")));
        }
        let label = label.into();
        for i in 0..=1000 {
            let x = a + (b - a) * i as f64 / 1000.0;
            if !f(x).is_finite() {
                return Err(NetError::Argument(format!("{label} is not finite at {x}")));
            }
        }
        Ok(Self { f: Arc::new(f), a, b, label })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The same function on a subinterval.
    pub fn restrict(&self, a: f64, b: f64) -> Result<Self> {
        let f = Arc::clone(&self.f);
        Self::new(move |x| f(x), a, b, self.label.clone())
    }

    /// `t ↦ f(c + h t)`, which maps `[-1, 1]` onto `[c - h, c + h]`.
    fn recentred(&self) -> Result<Self> {
        let c = 0.5 * (self.a + self.b);
        let h = 0.5 * (self.b - self.a);
        let f = Arc::clone(&self.f);
        Self::new(move |t| f(c + h * t), -1.0, 1.0, self.label.clone())
    }

    /// Sampled `max |f|` on the interval, padded by one sample spacing
    /// (members of the class are 1-Lipschitz).
    pub fn sup_estimate(&self) -> f64 {
        let n = 4096;
        let h = (self.b - self.a) / n as f64;
        (0..=n).map(|i| self.eval(self.a + h * i as f64).abs()).fold(0.0, f64::max) + h
    }
}

/// Interpolating polynomial at the first-kind Chebyshev nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevExpansion {
    /// `c_0, ..., c_m` in the basis `T_0, ..., T_m`.
    pub coeffs: Vec<f64>,
    /// `a_0, ..., a_m` in the monomial basis.
    pub monomial_coeffs: Vec<f64>,
    /// Largest `|p(x_k) - f(x_k)|` over the nodes, recomputed after the fit.
    pub residual: f64,
}

impl ChebyshevExpansion {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `|c_j| ≤ 2 + 1e-6` for every `j`, as it must for members of the
    /// smooth class.
    pub fn within_coefficient_bound(&self) -> bool {
        self.coeffs.iter().all(|c| c.abs() <= COEFF_GUARD)
    }

    pub fn ill_conditioned(&self) -> bool {
        self.degree() > WARN_CHEBYSHEV_DEGREE
    }

    /// `Σ c_j T_j(x)` by Clenshaw's recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }
}

/// Monomial coefficients of `T_0, ..., T_m`, row `k` holding `T_k`.
pub(crate) fn chebyshev_monomials(m: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![0.0; m + 1]; m + 1];
    t[0][0] = 1.0;
    if m >= 1 {
        t[1][1] = 1.0;
    }
    for k in 2..=m {
        for i in 0..=k {
            let up = if i > 0 { 2.0 * t[k - 1][i - 1] } else { 0.0 };
            t[k][i] = up - t[k - 2][i];
        }
    }
    t
}

/// Degree-`m` interpolant of `f` (which must live on `[-1, 1]`).
pub fn chebyshev_expand(f: &SmoothDescriptor, m: usize) -> Result<ChebyshevExpansion> {
    if f.interval() != (-1.0, 1.0) {
        return Err(NetError::Argument(format!("{} must be given on [-1, 1]", f.label())));
    }
    if m > MAX_CHEBYSHEV_DEGREE {
        return Err(NetError::Argument(format!("degree {m} exceeds the cap {MAX_CHEBYSHEV_DEGREE}")));
    }
    let n = m + 1;
    let theta: Vec<f64> = (0..n).map(|k| (2 * k + 1) as f64 * PI / (2 * n) as f64).collect();
    let fx: Vec<f64> = theta.iter().map(|t| f.eval(t.cos())).collect();
    let coeffs: Vec<f64> = (0..n)
        .map(|j| {
            let s: f64 = theta.iter().zip(&fx).map(|(t, v)| v * (j as f64 * t).cos()).sum();
            let w = if j == 0 { 1.0 } else { 2.0 };
            w * s / n as f64
        })
        .collect();
    let t = chebyshev_monomials(m);
    let monomial_coeffs = (0..n).map(|i| (0..n).map(|k| coeffs[k] * t[k][i]).sum()).collect();
    let mut exp = ChebyshevExpansion { coeffs, monomial_coeffs, residual: 0.0 };
    exp.residual = theta.iter().zip(&fx).map(|(t, v)| (exp.eval(t.cos()) - v).abs()).fold(0.0, f64::max);
    Ok(exp)
}

/// `⌈log2(2/eps)⌉`.
pub fn smooth_degree(eps: f64) -> usize {
    (2.0 / eps).log2().ceil() as usize
}

/// `Ψ_{f,ε}` with `‖Ψ - f‖_{L∞[-1,1]} ≤ eps` for `f` on `[-1, 1]`: the
/// Chebyshev interpolant of degree [`smooth_degree`]`(eps)` (error at most
/// `eps/2`) realized by [`polynomial_network`] with tolerance `eps/2`.
///
/// Fails when a Chebyshev coefficient exceeds 2, which rules out membership
/// in the smooth class.
pub fn smooth_network(f: &SmoothDescriptor, eps: f64) -> Result<Network> {
    check_eps(eps)?;
    let exp = chebyshev_expand(f, smooth_degree(eps))?;
    if !exp.within_coefficient_bound() {
        return Err(NetError::Argument(format!(
            "{} has Chebyshev coefficients above 2; it is not in the smooth class",
            f.label()
        )));
    }
    polynomial_network(&exp.monomial_coeffs, 1.0, eps / 2.0)
}

/// Approximation on an arbitrary interval `[a, b]`.
///
/// Intervals of length at most 2 are mapped affinely onto `[-1, 1]`. Longer
/// ones are cut into `n = ⌈b - a⌉` cells and local approximations on pairs
/// of neighbouring cells are glued with [`stitch_networks`].
pub fn smooth_network_general(f: &SmoothDescriptor, eps: f64) -> Result<Network> {
    check_eps(eps)?;
    let (a, b) = f.interval();
    if b - a <= 2.0 {
        return smooth_short(f, eps);
    }
    let n = (b - a).ceil() as usize;
    let knots: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + i as f64 * (b - a) / n as f64 }).collect();
    let locals = (1..n)
        .map(|i| smooth_short(&f.restrict(knots[i - 1], knots[i + 1])?, eps / 3.0))
        .collect::<Result<Vec<_>>>()?;
    stitch_networks(&locals, &knots, eps, f.sup_estimate().max(1.0))
}

// intervals of length at most 2 (up to rounding)
fn smooth_short(f: &SmoothDescriptor, eps: f64) -> Result<Network> {
    let (a, b) = f.interval();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    if c == 0.0 && h == 1.0 {
        return smooth_network(f, eps);
    }
    let inner = smooth_network(&f.recentred()?, eps)?;
    let to_unit = affine_network(&Layer::from_f64_rows(&[&[1.0 / h]], &[-c / h])?);
    compose(&inner, &to_unit)
}

/// Hat functions `Ψ_1, ..., Ψ_{n-1}` on the knots `a_0 < ... < a_n`, each
/// weight-reduced. `Ψ_1` is 1 left of `a_1` and `Ψ_{n-1}` is 1 right of
/// `a_{n-1}`; together they sum to 1 everywhere.
pub fn hat_partition(knots: &[f64]) -> Result<Vec<Network>> {
    let n = knots.len().saturating_sub(1);
    if n < 3 {
        return Err(NetError::Argument("at least two hats (four knots) are needed".into()));
    }
    if knots.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(NetError::Argument("knots must be strictly increasing".into()));
    }
    let ramp = |shifts: &[f64], coeffs: &[f64], bias: f64| -> Result<Network> {
        let rows: Vec<&[f64]> = shifts.iter().map(|_| &[1.0][..]).collect();
        let b1: Vec<f64> = shifts.iter().map(|s| -s).collect();
        let net = Network::new(vec![Layer::from_f64_rows(&rows, &b1)?, Layer::from_f64_rows(&[coeffs], &[bias])?])?;
        reduce_weights(&net)
    };
    let k = knots;
    (1..n)
        .map(|i| {
            if i == 1 {
                let h = k[2] - k[1];
                ramp(&[k[1], k[2]], &[-1.0 / h, 1.0 / h], 1.0)
            } else if i == n - 1 {
                let h = k[n - 1] - k[n - 2];
                ramp(&[k[n - 2], k[n - 1]], &[1.0 / h, -1.0 / h], 0.0)
            } else {
                let (h0, h1) = (k[i] - k[i - 1], k[i + 1] - k[i]);
                ramp(&[k[i - 1], k[i], k[i + 1]], &[1.0 / h0, -(1.0 / h0 + 1.0 / h1), 1.0 / h1], 0.0)
            }
        })
        .collect()
}

/// Glues local approximations with a partition of unity.
///
/// `locals[i-1]` must approximate the target within `eps/3` on
/// `[a_{i-1}, a_{i+1}]` and `f_bound ≥ max(1, ‖f‖∞)`. The result is
/// `Σ_i Φ_mult(Φ_i(x), Ψ_i(x))` with the multiplication accurate to `eps/3`
/// on `[-(f_bound + 1/6), f_bound + 1/6]²`; its error on `[a_0, a_n]` is at
/// most `eps`.
pub fn stitch_networks(locals: &[Network], knots: &[f64], eps: f64, f_bound: f64) -> Result<Network> {
    check_eps(eps)?;
    if locals.len() < 2 || locals.len() + 2 != knots.len() {
        return Err(NetError::Argument(format!(
            "{} local networks need {} knots, got {}",
            locals.len(),
            locals.len() + 2,
            knots.len()
        )));
    }
    let hats = hat_partition(knots)?;
    let mult = multiply_network(f_bound.max(1.0) + 1.0 / 6.0, eps / 3.0)?;
    let pieces = locals
        .iter()
        .zip(&hats)
        .map(|(phi, psi)| {
            let pair = parallelize_shared(&pad_to_common_depth(&[phi.clone(), psi.clone()])?)?;
            compose(&mult, &pair)
        })
        .collect::<Result<Vec<_>>>()?;
    sum_finite_width(&pieces)
}

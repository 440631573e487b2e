use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Float, ToPrimitive, Zero};
use relu_core::{Layer, Network};

use crate::{QuantError, Result};

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(QuantError::Argument(format!("eps must lie in (0, 1/2), got {eps}")))
    }
}

/// `⌈log2(1/eps)⌉`, exact on powers of two.
fn log_inv_eps(eps: f64) -> u32 {
    let x = 1.0 / eps;
    let mut c = x.log2().ceil().max(0.0) as i32;
    while c > 0 && 2f64.powi(c - 1) >= x {
        c -= 1;
    }
    while 2f64.powi(c) < x {
        c += 1;
    }
    c as u32
}

/// The lattice `2^{-m⌈log2(1/ε)⌉} ℤ ∩ [-ε^{-m}, ε^{-m}]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantGrid {
    m: u64,
    eps: f64,
    shift: u64,
}

impl QuantGrid {
    pub fn new(m: u64, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        if m == 0 {
            return Err(QuantError::Argument("m must be positive".into()));
        }
        let shift = m
            .checked_mul(log_inv_eps(eps) as u64)
            .filter(|s| *s <= (i32::MAX / 4) as u64)
            .ok_or_else(|| QuantError::Argument(format!("grid exponent for m = {m} is too large")))?;
        Ok(Self { m, eps, shift })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `m⌈log2(1/ε)⌉`; the step is `2^{-shift}`.
    pub fn shift(&self) -> u64 {
        self.shift
    }

    /// The step as an `f64`, which underflows to 0 for very fine grids.
    pub fn step(&self) -> f64 {
        libm::scalbn(1.0, -(self.shift as i32))
    }

    /// `ε^{-m}`, possibly `inf` in `f64`.
    pub fn bound(&self) -> f64 {
        self.eps.powf(-(self.m as f64))
    }

    /// Whether `|w| ≤ ε^{-m}`, compared in the log domain.
    pub fn within_bound(&self, w: f64) -> bool {
        w == 0.0 || w.abs().ln() <= self.m as f64 * (1.0 / self.eps).ln() * (1.0 + 1e-15)
    }

    /// Index `q` of the lattice point nearest to `w`; ties go toward the
    /// smaller `|q|`.
    pub fn index_of(&self, w: f64) -> BigInt {
        let (mant, exp, sign) = w.integer_decode();
        let e = exp as i64 + self.shift as i64;
        let mag = if mant == 0 {
            BigUint::zero()
        } else if e >= 0 {
            BigUint::from(mant) << e as u64
        } else {
            let s = (-e) as u32;
            if s >= 64 {
                BigUint::zero()
            } else {
                let fl = mant >> s;
                let rem = mant - (fl << s);
                let half = 1u64 << (s - 1);
                BigUint::from(if rem > half { fl + 1 } else { fl })
            }
        };
        BigInt::from_biguint(if sign < 0 { Sign::Minus } else { Sign::Plus }, mag)
    }

    /// `q · 2^{-shift}` as an `f64`, or `None` when that is not exactly
    /// representable.
    pub fn value_of(&self, q: &BigInt) -> Option<f64> {
        if q.is_zero() {
            return Some(0.0);
        }
        let mag = q.magnitude();
        let bits = mag.bits();
        let drop = bits.saturating_sub(53);
        if drop > 0 && mag.trailing_zeros().unwrap_or(0) < drop {
            return None;
        }
        let top = (mag >> drop).to_u64()? as f64;
        let exp = drop as i64 - self.shift as i64;
        let exp = i32::try_from(exp).ok()?;
        let v = libm::scalbn(top, exp);
        let v = if q.sign() == Sign::Minus { -v } else { v };
        (v.is_finite() && &self.index_of(v) == q).then_some(v)
    }

    /// Nearest lattice value.
    pub fn round(&self, w: f64) -> f64 {
        // rounding to the lattice only drops low mantissa bits, so the
        // result always fits in an f64
        self.value_of(&self.index_of(w)).expect("rounded value is representable")
    }

    pub fn contains(&self, w: f64) -> bool {
        self.value_of(&self.index_of(w)) == Some(w) && self.within_bound(w)
    }
}

/// `m = 3kL + ⌈log2⌈D⌉⌉`.
pub fn quantization_degree(k: u32, depth: usize, d: f64) -> u64 {
    let cd = d.ceil().max(1.0) as u64;
    let log_d = 64 - (cd - 1).leading_zeros() as u64;
    3 * k as u64 * depth as u64 + log_d
}

fn exponent_needed(value: f64, eps: f64) -> u32 {
    if value <= 1.0 {
        1
    } else {
        let k = (value.ln() / (1.0 / eps).ln()).ceil().max(1.0) as u32;
        // guard against ln rounding right at the threshold
        if eps.powi(-(k as i32 - 1)) >= value && k > 1 {
            k - 1
        } else {
            k
        }
    }
}

/// Smallest `k ≥ 1` with `M(net) ≤ ε^{-k}` and `B(net) ≤ ε^{-k}`.
pub fn minimal_k(net: &Network, eps: f64) -> Result<u32> {
    check_eps(eps)?;
    let m = net.metrics();
    Ok(exponent_needed(m.connectivity as f64, eps).max(exponent_needed(m.weight_magnitude, eps)))
}

/// Replaces every weight by the nearest point of the grid with
/// `m = 3kL + ⌈log2⌈D⌉⌉` and returns the new network together with `m`.
///
/// For `M(net) ≤ ε^{-k}` and `B(net) ≤ ε^{-k}` the outputs move by at most
/// `eps` on `[-D, D]^d`.
pub fn quantize_network(net: &Network, k: u32, d: f64, eps: f64) -> Result<(Network, u64)> {
    check_eps(eps)?;
    if k == 0 || !(d > 0.0 && d.is_finite()) {
        return Err(QuantError::Argument(format!("need k >= 1 and D > 0, got k = {k}, D = {d}")));
    }
    let metrics = net.metrics();
    let kmin = minimal_k(net, eps)?;
    let cap = eps.powi(-(k as i32));
    if metrics.connectivity as f64 > cap {
        return Err(QuantError::Precondition {
            which: "connectivity",
            value: metrics.connectivity.to_string(),
            k,
            minimal_k: kmin,
        });
    }
    if metrics.weight_magnitude > cap {
        return Err(QuantError::Precondition {
            which: "weight magnitude",
            value: metrics.weight_magnitude.to_string(),
            k,
            minimal_k: kmin,
        });
    }
    let m = quantization_degree(k, net.depth(), d);
    let grid = QuantGrid::new(m, eps)?;
    let layers = net
        .layers()
        .iter()
        .map(|l| {
            let w = l.matrix().iter().map(|&v| grid.round(v)).collect();
            let b = l.bias().iter().map(|&v| grid.round(v)).collect();
            Layer::new(l.rows(), l.cols(), w, b)
        })
        .collect::<relu_core::Result<Vec<_>>>()?;
    Ok((Network::new(layers)?, m))
}

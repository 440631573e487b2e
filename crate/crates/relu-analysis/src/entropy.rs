//! Covering and packing of `[-1, 1]` and a packing of the family
//! `f_θ(x) = 1 - e^{-θx}`, `θ ∈ [0, 1]`, in the sup norm on `[0, 1]`.

use crate::{AnalysisError, Result};

fn check(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(AnalysisError::Argument(format!("eps must lie in (0, 1), got {eps}")))
    }
}

const SLACK: f64 = 1e-12;

/// Centers of an `eps`-cover of `[-1, 1]`.
///
/// Uses `x_i = -1 + 2(i-1) eps`, `i = 1..=⌊1/eps⌋ + 1`. Those points leave
/// `(x_L + eps, 1]` uncovered when the fractional part of `1/eps` exceeds
/// 1/2; then the cover `-1 + (2i-1) eps`, `i = 1..=⌈1/eps⌉`, is returned
/// instead. Either way at most `1/eps + 1` centers are used and every point
/// of `[-1, 1]` lies within `eps` of one (checked).
pub fn cover_interval(eps: f64) -> Result<Vec<f64>> {
    check(eps)?;
    let inv = 1.0 / eps;
    let l = inv.floor() as usize + 1;
    let mut centers: Vec<f64> = (0..l).map(|i| -1.0 + 2.0 * i as f64 * eps).collect();
    if centers[l - 1] + eps < 1.0 - SLACK {
        let n = (inv - SLACK).ceil() as usize;
        centers = (1..=n).map(|i| (-1.0 + (2 * i - 1) as f64 * eps).min(1.0)).collect();
    }
    let covered = centers[0] - eps <= -1.0 + SLACK
        && centers[centers.len() - 1] + eps >= 1.0 - SLACK
        && centers.windows(2).all(|w| w[1] - w[0] <= 2.0 * eps * (1.0 + SLACK));
    assert!(covered, "cover of [-1, 1] at eps = {eps} leaves a gap");
    assert!(centers.len() as f64 <= inv + 1.0 + SLACK, "cover uses too many centers");
    Ok(centers)
}

/// A largest `eps`-packing of `[-1, 1]`: `⌈2/eps⌉` equispaced points,
/// pairwise more than `eps` apart (checked).
pub fn pack_interval(eps: f64) -> Result<Vec<f64>> {
    check(eps)?;
    let mut n = (2.0 / eps - SLACK).ceil() as usize;
    while n > 1 && 2.0 / (n - 1) as f64 <= eps {
        n -= 1;
    }
    let pts: Vec<f64> = (0..n).map(|i| if i + 1 == n { 1.0 } else { -1.0 + 2.0 * i as f64 / (n - 1) as f64 }).collect();
    assert!(pts.windows(2).all(|w| w[1] - w[0] > eps), "packing points too close");
    Ok(pts)
}

/// `θ_0 = 0` and `θ_i = -ln(1 - eps·i)` for `i = 1..=T`,
/// `T = ⌊(1 - 1/e)/eps⌋`, so that `f_{θ_i}(1) = eps·i` and the family is an
/// `eps`-packing in the sup norm on `[0, 1]` (checked at `x = 1`).
pub fn pack_exp_family(eps: f64) -> Result<Vec<f64>> {
    check(eps)?;
    let t = ((1.0 - (-1.0f64).exp()) / eps).floor() as usize;
    let thetas: Vec<f64> = (0..=t).map(|i| -(1.0 - eps * i as f64).ln()).collect();
    assert!(thetas.iter().all(|&th| (0.0..=1.0).contains(&th)), "theta outside [0, 1]");
    let at_one: Vec<f64> = thetas.iter().map(|&th| 1.0 - (-th).exp()).collect();
    for i in 0..at_one.len() {
        for j in 0..i {
            assert!((at_one[i] - at_one[j]).abs() >= eps * (1.0 - 1e-9), "thetas {j} and {i} closer than eps");
        }
    }
    Ok(thetas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn awkward_eps_still_covers() {
        // 1/0.35 has fractional part above one half
        let c = cover_interval(0.35).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.len() as f64 <= 1.0 / 0.35 + 1.0);
    }

    #[test]
    fn rejects_eps_out_of_range() {
        assert!(cover_interval(1.0).is_err());
        assert!(pack_exp_family(0.0).is_err());
        assert!(pack_interval(-0.1).is_err());
    }
}

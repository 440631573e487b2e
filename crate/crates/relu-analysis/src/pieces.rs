//! How many affine pieces a function needs, and the asymptotic constant
//! `c = (1/4) ∫ sqrt|f''|`.
//!
//! [`min_pieces`] works on `grid_n` equispaced samples and covers them
//! greedily from the left: each piece is extended while the best sup-norm
//! line through its samples stays within `eps`. The pieces need not join up.
//!
//! Greedy is optimal here. Feasibility of a run of samples is inherited by
//! every sub-run, so if an optimal cover has its `j`-th piece ending at
//! sample `e*_j`, induction on `j` shows the greedy `j`-th piece ends at
//! some `e_j ≥ e*_j`: the greedy piece `j + 1` starts no later than the
//! optimal one and may therefore run at least as far. Hence greedy never
//! uses more pieces.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{AnalysisError, Result};

/// Minimum number of grid points a piece (other than the last) must span.
pub const MIN_POINTS_PER_PIECE: usize = 10;

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Half the smallest vertical width of a strip holding all points, i.e. the
/// sup error of the best line. Points must be sorted by abscissa.
pub fn minimax_line_error(xs: &[f64], ys: &[f64]) -> f64 {
    if xs.len() <= 2 {
        return 0.0;
    }
    let pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    let mut lower: Vec<(f64, f64)> = Vec::new();
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) >= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    // width(σ) = max(y - σx) - min(y - σx) is convex in σ with its minimum at a hull edge slope
    let mut slopes: Vec<f64> = lower
        .windows(2)
        .chain(upper.windows(2))
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    slopes.sort_by(f64::total_cmp);
    let width = |s: f64| {
        let hi = upper.iter().map(|p| p.1 - s * p.0).fold(f64::NEG_INFINITY, f64::max);
        let lo = lower.iter().map(|p| p.1 - s * p.0).fold(f64::INFINITY, f64::min);
        hi - lo
    };
    let (mut l, mut r) = (0, slopes.len() - 1);
    while l < r {
        let m = (l + r) / 2;
        if width(slopes[m]) <= width(slopes[m + 1]) {
            r = m;
        } else {
            l = m + 1;
        }
    }
    0.5 * width(slopes[l]).max(0.0)
}

/// Fewest free affine pieces approximating `f` within `eps` on `grid_n`
/// equispaced samples of `[a, b]`.
pub fn min_pieces(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64, grid_n: usize) -> Result<usize> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(AnalysisError::EmptyDomain(format!("[{a}, {b}]")));
    }
    if !(eps > 0.0) || grid_n < 2 {
        return Err(AnalysisError::Argument(format!("need eps > 0 and grid_n >= 2, got {eps} and {grid_n}")));
    }
    let xs: Vec<f64> = (0..grid_n).map(|i| a + (b - a) * i as f64 / (grid_n - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    if let Some(x) = xs.iter().zip(&ys).find(|(_, y)| !y.is_finite()).map(|(x, _)| *x) {
        return Err(AnalysisError::Argument(format!("f is not finite at {x}")));
    }
    let fits = |s: usize, e: usize| minimax_line_error(&xs[s..=e], &ys[s..=e]) <= eps;
    let n = grid_n;
    let mut pieces = 0;
    let mut s = 0;
    while s < n {
        // gallop, then bisect, for the last feasible end
        let mut good = s;
        let mut step = 1;
        let mut bad = loop {
            let e = s + step;
            if e >= n {
                break n;
            }
            if !fits(s, e) {
                break e;
            }
            good = e;
            step *= 2;
        };
        while bad - good > 1 {
            let m = good + (bad - good) / 2;
            if fits(s, m) {
                good = m;
            } else {
                bad = m;
            }
        }
        pieces += 1;
        let span = good - s + 1;
        if good + 1 < n && span < MIN_POINTS_PER_PIECE {
            return Err(AnalysisError::Resolution { points: span, needed: MIN_POINTS_PER_PIECE });
        }
        s = good + 1;
    }
    Ok(pieces)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    refined: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

const MAX_PANELS: usize = 1 << 20;

fn panel(g: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Panel {
    let m = 0.5 * (a + b);
    let (fl, fr) = (g(0.5 * (a + m)), g(0.5 * (m + b)));
    let h = b - a;
    let whole = h / 6.0 * (fa + 4.0 * fm + fb);
    let refined = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
    Panel { a, b, fa, fm, fb, refined, err: (refined - whole).abs() / 15.0 }
}

/// `∫_a^b g` by globally adaptive Simpson quadrature to relative tolerance
/// `rtol` (absolute when the integral vanishes).
pub fn integrate(g: &dyn Fn(f64) -> f64, a: f64, b: f64, rtol: f64) -> Result<f64> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(AnalysisError::EmptyDomain(format!("[{a}, {b}]")));
    }
    let mut heap = BinaryHeap::new();
    let n0 = 64;
    for i in 0..n0 {
        let l = a + (b - a) * i as f64 / n0 as f64;
        let r = if i + 1 == n0 { b } else { a + (b - a) * (i + 1) as f64 / n0 as f64 };
        let m = 0.5 * (l + r);
        heap.push(panel(g, l, r, g(l), g(m), g(r)));
    }
    loop {
        let total: f64 = heap.iter().map(|p| p.refined).sum();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if !total.is_finite() {
            return Err(AnalysisError::Quadrature("integrand is not finite".into()));
        }
        if err <= rtol * total.abs() || err <= f64::MIN_POSITIVE {
            return Ok(total);
        }
        if heap.len() >= MAX_PANELS {
            return Err(AnalysisError::Quadrature(format!("error estimate {err:e} after {MAX_PANELS} panels")));
        }
        // split the worst panels in bulk to keep the summation cheap
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let p = heap.pop().expect("nonempty");
            let m = 0.5 * (p.a + p.b);
            if !(p.a < m && m < p.b) {
                return Err(AnalysisError::Quadrature(format!("panel at {} cannot be split", p.a)));
            }
            let (fl, fr) = (g(0.5 * (p.a + m)), g(0.5 * (m + p.b)));
            heap.push(panel(g, p.a, m, p.fa, fl, p.fm));
            heap.push(panel(g, m, p.b, p.fm, fr, p.fb));
        }
    }
}

/// `c = (1/4) ∫_a^b sqrt|f''(x)| dx`, to relative tolerance 1e-8.
pub fn frenzen_constant(f2: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    let g = |x: f64| 0.25 * f2(x).abs().sqrt();
    integrate(&g, a, b, 1e-8)
}

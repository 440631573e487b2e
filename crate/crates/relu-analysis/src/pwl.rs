//! Exact piecewise-linear form of one-dimensional networks.
//!
//! Breakpoints are propagated layer by layer: on the current knot set every
//! hidden preactivation is linear between consecutive knots, so a new knot is
//! needed exactly where one of them changes sign inside a segment. Knots
//! closer than [`MERGE_TOL`] (relative) to an existing one are not inserted.

use relu_core::Network;

use crate::{AnalysisError, Result};

/// Relative distance below which two breakpoints are taken to coincide.
pub const MERGE_TOL: f64 = 1e-12;

/// A knot bends the function when the slopes on either side differ by more
/// than this, relatively.
pub const SLOPE_TOL: f64 = 1e-9;

/// Deviation from collinearity, in units of the largest value, that
/// rounding alone can produce.
const ROUNDING_TOL: f64 = 1e-14;

/// Default knot budget for [`exact_pwl`].
pub const DEFAULT_MAX_KNOTS: usize = 1 << 24;

/// Continuous piecewise-linear function on `[knots[0], knots[n-1]]`, extended
/// affinely beyond both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct PwlFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
    left_slope: f64,
    right_slope: f64,
}

impl PwlFunction {
    /// Interpolant through `(knots[i], values[i])`; the boundary slopes are
    /// those of the first and last segment.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(AnalysisError::Argument(format!(
                "need at least two knots with one value each, got {} knots and {} values",
                knots.len(),
                values.len()
            )));
        }
        if knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(AnalysisError::Argument("knots and values must be finite".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AnalysisError::Argument("knots must be strictly increasing".into()));
        }
        let n = knots.len();
        let left_slope = (values[1] - values[0]) / (knots[1] - knots[0]);
        let right_slope = (values[n - 1] - values[n - 2]) / (knots[n - 1] - knots[n - 2]);
        Ok(Self { knots, values, left_slope, right_slope })
    }

    /// Knots including both interval ends.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Interior knots.
    pub fn breakpoints(&self) -> &[f64] {
        &self.knots[1..self.knots.len() - 1]
    }

    pub fn pieces(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn left_slope(&self) -> f64 {
        self.left_slope
    }

    pub fn right_slope(&self) -> f64 {
        self.right_slope
    }

    /// Slope of every piece, left to right.
    pub fn slopes(&self) -> Vec<f64> {
        self.knots
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x <= self.knots[0] {
            return self.values[0] + self.left_slope * (x - self.knots[0]);
        }
        if x >= self.knots[n - 1] {
            return self.values[n - 1] + self.right_slope * (x - self.knots[n - 1]);
        }
        let i = self.knots.partition_point(|&k| k <= x) - 1;
        let t = (x - self.knots[i]) / (self.knots[i + 1] - self.knots[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    /// Drops knots at which the function does not bend: the slopes on the
    /// two sides must differ by more than [`SLOPE_TOL`] relatively and the
    /// knot must sit off the chord of its neighbours by more than rounding.
    pub fn canonical(&self) -> Self {
        let scale = self.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = ROUNDING_TOL * scale;
        let n = self.knots.len();
        let mut kx = vec![self.knots[0]];
        let mut ky = vec![self.values[0]];
        for i in 1..n - 1 {
            let (x0, y0) = (kx[kx.len() - 1], ky[ky.len() - 1]);
            let (x, y) = (self.knots[i], self.values[i]);
            let (x1, y1) = (self.knots[i + 1], self.values[i + 1]);
            let (sl, sr) = ((y - y0) / (x - x0), (y1 - y) / (x1 - x));
            let chord = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            if (sr - sl).abs() > SLOPE_TOL * sl.abs().max(sr.abs()) && (y - chord).abs() > tol {
                kx.push(x);
                ky.push(y);
            }
        }
        kx.push(self.knots[n - 1]);
        ky.push(self.values[n - 1]);
        Self::new(kx, ky).expect("subset of valid knots")
    }
}

fn check_scalar(net: &Network) -> Result<()> {
    if net.in_dim() != 1 || net.out_dim() != 1 {
        return Err(AnalysisError::Dimension { expected: 1, got_in: net.in_dim(), got_out: net.out_dim() });
    }
    Ok(())
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(AnalysisError::EmptyDomain(format!("[{a}, {b}]")));
    }
    Ok(())
}

/// The function realized by `net` on `[a, b]` in canonical form (every
/// interior knot is a genuine bend).
pub fn exact_pwl(net: &Network, a: f64, b: f64) -> Result<PwlFunction> {
    exact_pwl_limited(net, a, b, DEFAULT_MAX_KNOTS)
}

/// [`exact_pwl`] giving up with [`AnalysisError::TooManyPieces`] as soon as
/// an intermediate knot set exceeds `max_knots`.
pub fn exact_pwl_limited(net: &Network, a: f64, b: f64, max_knots: usize) -> Result<PwlFunction> {
    check_scalar(net)?;
    check_interval(a, b)?;
    let mut xs = vec![a, b];
    // hidden state, row-major: knot i occupies h[i*w .. (i+1)*w]
    let mut w = 1;
    let mut h = vec![a, b];
    let last = net.depth() - 1;
    for (li, layer) in net.layers().iter().enumerate() {
        let rows = layer.rows();
        let mut pre = vec![0.0; xs.len() * rows];
        for i in 0..xs.len() {
            let out = layer.apply(&h[i * w..(i + 1) * w]);
            pre[i * rows..(i + 1) * rows].copy_from_slice(&out);
        }
        if li == last {
            let pwl = PwlFunction::new(xs, pre)?;
            return Ok(pwl.canonical());
        }
        let (nx, mut np) = refine(&xs, &pre, rows, max_knots)?;
        np.iter_mut().for_each(|v| *v = v.max(0.0));
        xs = nx;
        h = np;
        w = rows;
    }
    unreachable!("the last layer returns")
}

/// Inserts the zero crossings of every column of `pre` (linear between
/// knots) and interpolates all columns at the new knots.
fn refine(xs: &[f64], pre: &[f64], w: usize, max_knots: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut nx = Vec::with_capacity(xs.len());
    let mut np = Vec::with_capacity(pre.len());
    let mut ts: Vec<(f64, usize)> = Vec::new();
    for i in 0..xs.len() {
        nx.push(xs[i]);
        np.extend_from_slice(&pre[i * w..(i + 1) * w]);
        if i + 1 == xs.len() {
            break;
        }
        let (x0, x1) = (xs[i], xs[i + 1]);
        let (p0, p1) = (&pre[i * w..(i + 1) * w], &pre[(i + 1) * w..(i + 2) * w]);
        ts.clear();
        for j in 0..w {
            if (p0[j] < 0.0 && p1[j] > 0.0) || (p0[j] > 0.0 && p1[j] < 0.0) {
                ts.push((p0[j] / (p0[j] - p1[j]), j));
            }
        }
        if ts.is_empty() {
            continue;
        }
        ts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut prev = x0;
        for &(t, j) in &ts {
            let x = x0 + t * (x1 - x0);
            let close = |u: f64| (x - u).abs() <= MERGE_TOL * x.abs().max(u.abs()).max(1.0);
            if close(prev) || close(x1) || x <= prev || x >= x1 {
                continue;
            }
            nx.push(x);
            let base = np.len();
            np.extend(p0.iter().zip(p1).map(|(&u, &v)| u + t * (v - u)));
            np[base + j] = 0.0;
            prev = x;
        }
        if nx.len() > max_knots {
            return Err(AnalysisError::TooManyPieces(max_knots));
        }
    }
    Ok((nx, np))
}

/// Linear-region count of a one-dimensional network on an interval, with
/// the width/depth bound `(2W)^L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionCount {
    pub regions: u64,
    pub width: usize,
    pub depth: usize,
}

impl RegionCount {
    /// `log2((2W)^L)`.
    pub fn bound_log2(&self) -> f64 {
        self.depth as f64 * (2.0 * self.width as f64).log2()
    }

    /// `(2W)^L`, infinite once it overflows binary64.
    pub fn bound(&self) -> f64 {
        (2.0 * self.width as f64).powi(self.depth as i32)
    }

    pub fn within_bound(&self) -> bool {
        match 2u64.checked_mul(self.width as u64).and_then(|b| b.checked_pow(self.depth as u32)) {
            Some(bound) => self.regions <= bound,
            None => (self.regions as f64).log2() <= self.bound_log2(),
        }
    }
}

/// Number of maximal intervals of `[a, b]` on which `net` is affine.
pub fn count_linear_regions(net: &Network, a: f64, b: f64) -> Result<RegionCount> {
    let pwl = exact_pwl(net, a, b)?;
    let m = net.metrics();
    Ok(RegionCount { regions: pwl.pieces() as u64, width: m.width, depth: m.depth })
}

/// Pieces of `outer ∘ inner` on the interval of `inner`, counted without
/// materializing the composition. The values of `inner` must stay inside
/// the interval of `outer`.
pub fn count_composed_regions(outer: &PwlFunction, inner: &PwlFunction) -> Result<u64> {
    let ok = outer.knots();
    let (lo, hi) = outer.interval();
    let slack = MERGE_TOL * lo.abs().max(hi.abs()).max(1.0);
    if inner.values().iter().any(|&y| y < lo - slack || y > hi + slack) {
        return Err(AnalysisError::Argument(format!("inner values leave the outer interval [{lo}, {hi}]")));
    }
    let os = outer.slopes();
    let last_piece = os.len() - 1;
    let tol = |y: f64| MERGE_TOL * y.abs().max(1.0);
    let mut count = 0u64;
    let mut prev: Option<f64> = None;
    let mut push = |s: f64| {
        let bend = match prev {
            None => true,
            Some(p) => (s - p).abs() > SLOPE_TOL * s.abs().max(p.abs()),
        };
        if bend {
            count += 1;
        }
        prev = Some(s);
    };
    let (xs, ys) = (inner.knots(), inner.values());
    for i in 0..xs.len() - 1 {
        let (y0, y1) = (ys[i], ys[i + 1]);
        let s = (y1 - y0) / (xs[i + 1] - xs[i]);
        if y1 > y0 {
            let mut p = ok.partition_point(|&k| k <= y0 + tol(y0)).saturating_sub(1).min(last_piece);
            push(os[p] * s);
            while p + 1 <= last_piece && ok[p + 1] < y1 - tol(y1) {
                p += 1;
                push(os[p] * s);
            }
        } else if y1 < y0 {
            let mut p = ok.partition_point(|&k| k < y0 - tol(y0)).saturating_sub(1).min(last_piece);
            push(os[p] * s);
            while p > 0 && ok[p] > y1 + tol(y1) {
                p -= 1;
                push(os[p] * s);
            }
        } else {
            push(0.0);
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use relu_core::Layer;

    #[test]
    fn canonical_drops_collinear_knots() {
        let f = PwlFunction::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 2.0, 0.0]).unwrap();
        let c = f.canonical();
        assert_eq!(c.knots(), &[0.0, 2.0, 3.0]);
        assert_eq!(c.eval(1.5), 1.5);
        assert_eq!(c.eval(4.0), -2.0);
        assert_eq!(c.eval(-1.0), -1.0);
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(PwlFunction::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(PwlFunction::new(vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn relu_has_one_breakpoint() {
        let net = Network::new(vec![
            Layer::from_f64_rows(&[&[1.0]], &[0.0]).unwrap(),
            Layer::from_f64_rows(&[&[1.0]], &[0.0]).unwrap(),
        ])
        .unwrap();
        let f = exact_pwl(&net, -1.0, 1.0).unwrap();
        assert_eq!(f.breakpoints(), &[0.0]);
    }

    #[test]
    fn composed_count_of_folds() {
        // |x| on [-1, 1] composed with a two-piece tent
        let inner = PwlFunction::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]).unwrap();
        let outer = PwlFunction::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(count_composed_regions(&outer, &inner).unwrap(), 4);
        // a constant outer function flattens everything
        let flat = PwlFunction::new(vec![0.0, 1.0], vec![3.0, 3.0]).unwrap();
        assert_eq!(count_composed_regions(&flat, &inner).unwrap(), 1);
    }
}

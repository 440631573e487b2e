//! Sup-norm and L² distances between a network and a reference function on
//! uniform grids.

use std::io::Write;

use relu_core::Network;

use crate::pwl::exact_pwl_limited;
use crate::{AnalysisError, Result};

/// Knot budget used to collect breakpoints of one-dimensional networks. Deep
/// networks beyond it are measured on the grid alone.
pub const BREAKPOINT_BUDGET: usize = 1 << 16;

/// Points per batch when walking a lattice.
const CHUNK: usize = 1 << 14;

/// Axis-aligned box `Π [a_i, b_i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    bounds: Vec<(f64, f64)>,
}

impl Domain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(AnalysisError::EmptyDomain("no coordinates".into()));
        }
        for &(a, b) in &bounds {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(AnalysisError::EmptyDomain(format!("[{a}, {b}]")));
            }
        }
        Ok(Self { bounds })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn cube(d: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b); d])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.bounds.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Reals in CSV output: scientific notation with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub domain: Domain,
    /// Grid points per axis.
    pub grid_n: usize,
    /// Points actually evaluated (grid plus breakpoints in 1-D).
    pub points: usize,
    pub sup_error: f64,
    pub l2_error: f64,
    pub argmax: Vec<f64>,
    /// Whether every breakpoint of the network was among the points.
    pub breakpoints_included: bool,
}

impl ErrorReport {
    pub const CSV_HEADER: [&'static str; 5] = ["domain", "grid_n", "sup_error", "l2_error", "argmax"];

    pub fn csv_record(&self) -> Vec<String> {
        let argmax: Vec<String> = self.argmax.iter().map(|&x| fmt_real(x)).collect();
        vec![
            self.domain.to_string(),
            self.grid_n.to_string(),
            fmt_real(self.sup_error),
            fmt_real(self.l2_error),
            argmax.join(" "),
        ]
    }
}

/// Writes `reports` as CSV with a header row.
pub fn write_csv<W: Write>(out: W, reports: &[ErrorReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ErrorReport::CSV_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

fn axis(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

/// Sup and L² distance between `net` and `f` on `domain`.
///
/// The grid has `grid_n` points per axis. In one dimension the breakpoints
/// of the network are added whenever they can be extracted within
/// [`BREAKPOINT_BUDGET`] knots, and the L² norm uses Simpson's rule on each
/// cell (midpoints are evaluated for that but do not enter the sup). On
/// lattices the L² norm is the product trapezoid rule.
pub fn error_report(net: &Network, f: &dyn Fn(&[f64]) -> f64, domain: &Domain, grid_n: usize) -> Result<ErrorReport> {
    let d = domain.dim();
    if net.in_dim() != d || net.out_dim() != 1 {
        return Err(AnalysisError::Dimension { expected: d, got_in: net.in_dim(), got_out: net.out_dim() });
    }
    if grid_n < 2 {
        return Err(AnalysisError::Argument(format!("grid_n must be at least 2, got {grid_n}")));
    }
    if d == 1 {
        report_1d(net, f, domain, grid_n)
    } else {
        report_lattice(net, f, domain, grid_n)
    }
}

/// Same as [`error_report`]; named for the sup-norm reading.
pub fn sup_error(net: &Network, f: &dyn Fn(&[f64]) -> f64, domain: &Domain, grid_n: usize) -> Result<ErrorReport> {
    error_report(net, f, domain, grid_n)
}

/// Same as [`error_report`]; named for the L² reading.
pub fn l2_error(net: &Network, f: &dyn Fn(&[f64]) -> f64, domain: &Domain, grid_n: usize) -> Result<ErrorReport> {
    error_report(net, f, domain, grid_n)
}

fn report_1d(net: &Network, f: &dyn Fn(&[f64]) -> f64, domain: &Domain, grid_n: usize) -> Result<ErrorReport> {
    let (a, b) = domain.bounds()[0];
    let mut xs = axis(a, b, grid_n);
    let breakpoints_included = match exact_pwl_limited(net, a, b, BREAKPOINT_BUDGET) {
        Ok(pwl) => {
            xs.extend_from_slice(pwl.breakpoints());
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            true
        }
        Err(AnalysisError::TooManyPieces(_)) => false,
        Err(e) => return Err(e),
    };
    let ys = net.evaluate_batch(&xs)?;
    let errs: Vec<f64> = xs.iter().zip(&ys).map(|(&x, &y)| (y - f(&[x])).abs()).collect();
    let (mut sup, mut arg) = (0.0, a);
    for (&x, &e) in xs.iter().zip(&errs) {
        if e > sup || e.is_nan() {
            sup = e;
            arg = x;
        }
    }
    // Simpson on every cell: exact for the square of a linear error, which
    // is what a network minus a piecewise constant reference gives
    let mids: Vec<f64> = xs.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let ym = net.evaluate_batch(&mids)?;
    let mut sq = 0.0;
    for i in 0..xs.len() - 1 {
        let em = ym[i] - f(&[mids[i]]);
        sq += (xs[i + 1] - xs[i]) / 6.0 * (errs[i] * errs[i] + 4.0 * em * em + errs[i + 1] * errs[i + 1]);
    }
    Ok(ErrorReport {
        domain: domain.clone(),
        grid_n,
        points: xs.len(),
        sup_error: sup,
        l2_error: sq.sqrt(),
        argmax: vec![arg],
        breakpoints_included,
    })
}

fn report_lattice(net: &Network, f: &dyn Fn(&[f64]) -> f64, domain: &Domain, grid_n: usize) -> Result<ErrorReport> {
    let d = domain.dim();
    let axes: Vec<Vec<f64>> = domain.bounds().iter().map(|&(a, b)| axis(a, b, grid_n)).collect();
    let weights: Vec<f64> = domain
        .bounds()
        .iter()
        .map(|&(a, b)| (b - a) / (grid_n - 1) as f64)
        .collect();
    let total = grid_n
        .checked_pow(d as u32)
        .ok_or_else(|| AnalysisError::Argument(format!("{grid_n}^{d} lattice points overflow")))?;
    let (mut sup, mut arg, mut sq) = (0.0f64, axes.iter().map(|a| a[0]).collect::<Vec<_>>(), 0.0f64);
    let mut buf = Vec::with_capacity(CHUNK * d);
    let mut idx = Vec::with_capacity(CHUNK);
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        buf.clear();
        idx.clear();
        for p in start..end {
            let mut r = p;
            let mut w = 1.0;
            for k in 0..d {
                let i = r % grid_n;
                r /= grid_n;
                buf.push(axes[k][i]);
                w *= if i == 0 || i + 1 == grid_n { 0.5 * weights[k] } else { weights[k] };
            }
            idx.push(w);
        }
        let ys = net.evaluate_batch(&buf)?;
        for (j, (&y, &w)) in ys.iter().zip(&idx).enumerate() {
            let x = &buf[j * d..(j + 1) * d];
            let e = (y - f(x)).abs();
            if e > sup || e.is_nan() {
                sup = e;
                arg = x.to_vec();
            }
            sq += w * e * e;
        }
        start = end;
    }
    Ok(ErrorReport {
        domain: domain.clone(),
        grid_n,
        points: total,
        sup_error: sup,
        l2_error: sq.sqrt(),
        argmax: arg,
        breakpoints_included: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use relu_core::Layer;

    #[test]
    fn csv_shape() {
        let net = Network::from_layer(Layer::from_f64_rows(&[&[1.0, 1.0]], &[0.0]).unwrap());
        let dom = Domain::cube(2, 0.0, 1.0).unwrap();
        let r = error_report(&net, &|x| x[0] + x[1] - 0.5, &dom, 11).unwrap();
        assert_eq!(r.sup_error, 0.5);
        assert!((r.l2_error - 0.5).abs() < 1e-12);
        let mut out = Vec::new();
        write_csv(&mut out, &[r]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("domain,grid_n,sup_error,l2_error,argmax\n\"[0,1]x[0,1]\",11,5.0000000000000000e-1,"));
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(Domain::interval(1.0, 1.0).is_err());
        assert!(Domain::new(vec![]).is_err());
        assert!(Domain::interval(0.0, f64::INFINITY).is_err());
    }
}

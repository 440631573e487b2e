use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use relu_analysis::{count_linear_regions, error_report, fmt_real, frenzen_constant, min_pieces, AnalysisError, Domain};
use relu_core::calculus::prune;
use relu_core::{format, Network};
use relu_quantcode::{code_length_bound, decode, encode, minimal_k, quantize_network, QuantError, QuantGrid};

use crate::args::Params;
use crate::registry::{construct, Norm};
use crate::CliError;

/// A CSV table with a header row; every cell already formatted.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
    }

    /// Column `name` of row `i`.
    pub fn cell(&self, i: usize, name: &str) -> Option<&str> {
        let j = self.header.iter().position(|h| h == name)?;
        self.rows.get(i).map(|r| r[j].as_str())
    }
}

/// Writes the table to `out` when given and returns its text.
pub fn emit(table: &Table, out: Option<&Path>) -> Result<String, CliError> {
    let text = table.to_csv()?;
    if let Some(path) = out {
        fs::File::create(path)?.write_all(text.as_bytes())?;
    }
    Ok(text)
}

fn analysis_err(e: AnalysisError) -> CliError {
    match e {
        AnalysisError::Argument(_) | AnalysisError::EmptyDomain(_) => CliError::Usage(e.to_string()),
        _ => CliError::Data(e.to_string()),
    }
}

fn quant_err(e: QuantError) -> CliError {
    match e {
        QuantError::Argument(_) => CliError::Usage(e.to_string()),
        _ => CliError::Data(e.to_string()),
    }
}

fn metric_cells(net: &Network) -> Vec<String> {
    let m = net.metrics();
    vec![m.connectivity.to_string(), m.depth.to_string(), m.width.to_string(), fmt_real(m.weight_magnitude)]
}

pub fn read_network(path: &Path) -> Result<Network, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    format::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Points per axis so that a `dim`-dimensional lattice has about `total` points.
pub fn per_axis(total: usize, dim: usize) -> usize {
    ((total as f64).powf(1.0 / dim as f64).round() as usize).max(2)
}

/// `build`: writes the network and returns its metrics row.
pub fn build(name: &str, params: &Params) -> Result<(Table, Network), CliError> {
    let built = construct(name, params, None)?;
    let out = params.out.clone().unwrap_or_else(|| format!("{name}.relunet").into());
    fs::write(&out, format::to_string(&built.net))?;
    let mut t = Table::new(&["constructor", "connectivity", "depth", "width", "weight_magnitude", "path"]);
    let mut row = vec![name.to_string()];
    row.extend(metric_cells(&built.net));
    row.push(out.display().to_string());
    t.rows.push(row);
    Ok((t, built.net))
}

/// Relative allowance for L² rows in [`sweep`].
pub const L2_SLACK: f64 = 1e-9;

/// `sweep`: one row per eps with the measured error and the size metrics.
/// Rows whose error exceeds the requested eps are reported as a
/// postcondition violation after the table is complete.
pub fn sweep(name: &str, params: &Params) -> Result<(Table, Vec<usize>), CliError> {
    let eps_list = params.eps_list()?;
    let grid = params.grid()?;
    let mut t = Table::new(&["eps", "norm", "error", "connectivity", "depth", "width", "weight_magnitude"]);
    let mut breached = Vec::new();
    for (i, &eps) in eps_list.iter().enumerate() {
        let built = construct(name, params, Some(eps))?;
        let n = per_axis(grid, built.domain.dim());
        let report = error_report(&built.net, &*built.reference, &built.domain, n).map_err(analysis_err)?;
        let err = match built.norm {
            Norm::Sup => report.sup_error,
            Norm::L2 => report.l2_error,
        };
        // quadrature can only approximate an L² norm; allow for its rounding
        let slack = if built.norm == Norm::L2 { 1.0 + L2_SLACK } else { 1.0 };
        if !(err <= eps * slack) {
            breached.push(i);
        }
        let mut row = vec![fmt_real(eps), built.norm.name().to_string(), fmt_real(err)];
        row.extend(metric_cells(&built.net));
        t.rows.push(row);
    }
    Ok((t, breached))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodecReport {
    pub k: u32,
    pub m: u64,
    pub connectivity: usize,
    pub bits: u64,
    pub bound: u64,
    pub round_trip: bool,
    pub deviation: f64,
}

impl CodecReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["k", "m", "connectivity", "bits", "bound", "round_trip", "deviation"]);
        t.rows.push(vec![
            self.k.to_string(),
            self.m.to_string(),
            self.connectivity.to_string(),
            self.bits.to_string(),
            self.bound.to_string(),
            self.round_trip.to_string(),
            fmt_real(self.deviation),
        ]);
        t
    }
}

/// Sup of `|a - b|` over a lattice of `[-D, D]^d` with about `grid` points.
pub fn deviation(a: &Network, b: &Network, d: f64, grid: usize) -> Result<f64, CliError> {
    let dim = a.in_dim();
    let domain = Domain::cube(dim, -d, d).map_err(analysis_err)?;
    let mut worst = 0.0f64;
    for j in 0..a.out_dim() {
        let pick = |net: &Network| -> Result<Network, CliError> {
            let last = net.last();
            let row = relu_core::Layer::new(1, last.cols(), last.row(j).to_vec(), vec![last.bias()[j]])
                .map_err(|e| CliError::Data(e.to_string()))?;
            let mut layers = net.layers().to_vec();
            *layers.last_mut().expect("nonempty") = row;
            Network::new(layers).map_err(|e| CliError::Data(e.to_string()))
        };
        let (aj, bj) = (pick(a)?, pick(b)?);
        let r = error_report(&aj, &|x| bj.evaluate(x).expect("same input dimension")[0], &domain, per_axis(grid, dim))
            .map_err(analysis_err)?;
        worst = worst.max(r.sup_error);
    }
    Ok(worst)
}

/// Prunes, quantizes (with `k` or the smallest admissible one), encodes
/// and decodes `net`.
pub fn codec_network(net: &Network, k: Option<u32>, d: f64, eps: f64, grid: usize) -> Result<(CodecReport, Network, Vec<u8>), CliError> {
    let pruned = prune(net);
    let k = match k {
        Some(k) => k,
        None => minimal_k(&pruned, eps).map_err(quant_err)?,
    };
    let (q, m) = quantize_network(&pruned, k, d, eps).map_err(quant_err)?;
    let qgrid = QuantGrid::new(m, eps).map_err(quant_err)?;
    let bits = encode(&q, &qgrid).map_err(quant_err)?;
    let back = decode(&bits, &qgrid).map_err(quant_err)?;
    let connectivity = q.metrics().connectivity;
    let round_trip = match &back {
        Some(b) => b.bitwise_eq(&q),
        None => connectivity == 0,
    };
    let report = CodecReport {
        k,
        m,
        connectivity,
        bits: bits.len() as u64,
        bound: code_length_bound(connectivity as u64, &qgrid),
        round_trip,
        deviation: deviation(&q, net, d, grid)?,
    };
    Ok((report, q, bits.to_bytes()))
}

pub fn codec(file: &Path, params: &Params) -> Result<CodecReport, CliError> {
    let eps = Params::need(params.eps, "eps")?;
    let d = params.d.unwrap_or(1.0);
    let net = read_network(file)?;
    let (report, _, bytes) = codec_network(&net, params.k, d, eps, params.grid()?)?;
    if let Some(out) = &params.out {
        fs::write(out, bytes)?;
    }
    Ok(report)
}

/// Violations of the codec guarantees, if any.
pub fn codec_violations(r: &CodecReport, eps: f64) -> Vec<String> {
    let mut v = Vec::new();
    if !r.round_trip {
        v.push("decoded network differs from the quantized one".to_string());
    }
    if r.bits > r.bound {
        v.push(format!("code length {} exceeds the bound {}", r.bits, r.bound));
    }
    if !(r.deviation <= eps) {
        v.push(format!("quantization moved the output by {} > eps = {eps}", r.deviation));
    }
    v
}

pub fn regions(file: &Path, params: &Params) -> Result<(Table, bool), CliError> {
    let net = read_network(file)?;
    let (a, b) = params.interval()?;
    let r = count_linear_regions(&net, a, b).map_err(analysis_err)?;
    let mut t = Table::new(&["a", "b", "regions", "width", "depth", "bound_log2", "bound"]);
    t.rows.push(vec![
        fmt_real(a),
        fmt_real(b),
        r.regions.to_string(),
        r.width.to_string(),
        r.depth.to_string(),
        fmt_real(r.bound_log2()),
        fmt_real(r.bound()),
    ]);
    Ok((t, r.within_bound()))
}

pub const FUNCTIONS: &[&str] = &["square", "cos_a", "weierstrass_partial"];

/// `f` and `f''` of a builtin function.
#[allow(clippy::type_complexity)]
pub fn builtin_function(name: &str, params: &Params) -> Result<(Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>), CliError> {
    Ok(match name {
        "square" => (Box::new(|x| x * x), Box::new(|_| 2.0)),
        "cos_a" => {
            let a = Params::need(params.a, "a")?;
            (Box::new(move |x| (a * x).cos()), Box::new(move |x| -a * a * (a * x).cos()))
        }
        "weierstrass_partial" => {
            let p = params.p.unwrap_or(0.4);
            let a = params.a.unwrap_or(3.0);
            let terms = params.s.unwrap_or(3);
            let f = move |x: f64| (0..=terms).map(|k| p.powi(k as i32) * (a.powi(k as i32) * PI * x).cos()).sum();
            let f2 = move |x: f64| {
                (0..=terms)
                    .map(|k| {
                        let w = a.powi(k as i32) * PI;
                        -p.powi(k as i32) * w * w * (w * x).cos()
                    })
                    .sum()
            };
            (Box::new(f), Box::new(f2))
        }
        other => {
            return Err(CliError::Usage(format!("unknown function `{other}`; expected one of {}", FUNCTIONS.join(", "))))
        }
    })
}

pub fn minpieces(name: &str, params: &Params) -> Result<Table, CliError> {
    let (f, f2) = builtin_function(name, params)?;
    let (a, b) = params.interval()?;
    let grid = params.grid()?;
    let eps_list = params.eps_list()?;
    let c = frenzen_constant(&*f2, a, b).map_err(analysis_err)?;
    let mut t = Table::new(&["eps", "pieces", "pieces_sqrt_eps", "frenzen"]);
    for eps in eps_list {
        let n = min_pieces(&*f, a, b, eps, grid).map_err(analysis_err)?;
        t.rows.push(vec![fmt_real(eps), n.to_string(), fmt_real(n as f64 * eps.sqrt()), fmt_real(c)]);
    }
    Ok(t)
}

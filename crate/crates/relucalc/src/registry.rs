//! Named constructors, each with its reference function and natural domain.

use std::f64::consts::PI;

use relu_analysis::Domain;
use relu_constructors as rc;
use relu_core::{NetError, Network};

use crate::args::Params;
use crate::CliError;

pub const CONSTRUCTORS: &[&str] = &[
    "hat",
    "sawtooth",
    "square",
    "multiply",
    "polynomial",
    "cosine",
    "sine",
    "weierstrass",
    "bspline",
    "wavelet",
    "haar",
    "gaussian",
];

/// Terms in the Weierstrass reference sum.
pub const WEIERSTRASS_REFERENCE_TERMS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    Sup,
    L2,
}

impl Norm {
    pub fn name(self) -> &'static str {
        match self {
            Norm::Sup => "sup",
            Norm::L2 => "l2",
        }
    }
}

pub type Reference = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

pub struct Built {
    pub net: Network,
    pub reference: Reference,
    pub domain: Domain,
    /// The norm in which the construction promises `eps`.
    pub norm: Norm,
}

pub fn weierstrass_reference(p: f64, a: f64, x: f64) -> f64 {
    (0..WEIERSTRASS_REFERENCE_TERMS)
        .map(|k| p.powi(k as i32) * (a.powi(k as i32) * PI * x).cos())
        .sum()
}

fn param_err(e: NetError) -> CliError {
    CliError::Usage(format!("invalid parameters: {e}"))
}

fn dom(bounds: Vec<(f64, f64)>) -> Result<Domain, CliError> {
    Domain::new(bounds).map_err(|e| CliError::Usage(e.to_string()))
}

/// Builds `name` with the given flags; `eps` overrides `--eps`.
pub fn construct(name: &str, params: &Params, eps: Option<f64>) -> Result<Built, CliError> {
    let eps_of = || Params::need(eps.or(params.eps), "eps");
    let d = params.d.unwrap_or(1.0);
    let sup = |net: Network, reference: Reference, domain: Domain| Built { net, reference, domain, norm: Norm::Sup };
    Ok(match name {
        "hat" => {
            let hat = |x: f64| if (0.0..=0.5).contains(&x) { 2.0 * x } else if (0.5..=1.0).contains(&x) { 2.0 - 2.0 * x } else { 0.0 };
            sup(rc::hat_network(), Box::new(move |x| hat(x[0])), dom(vec![(-0.5, 1.5)])?)
        }
        "sawtooth" => {
            let s = Params::need(params.s, "s")?;
            if s == 0 || s > 60 {
                return Err(CliError::Usage(format!("--s must lie in 1..=60, got {s}")));
            }
            sup(rc::sawtooth_network(s), Box::new(move |x| rc::sawtooth_value(s as u32, x[0])), dom(vec![(0.0, 1.0)])?)
        }
        "square" => {
            let net = match (params.m, eps.or(params.eps)) {
                (_, Some(e)) => rc::square_network(e),
                (Some(m), None) => rc::square_network_m(m),
                (None, None) => return Err(CliError::Usage("square needs --eps or --m".into())),
            }
            .map_err(param_err)?;
            sup(net, Box::new(|x| x[0] * x[0]), dom(vec![(0.0, 1.0)])?)
        }
        "multiply" => {
            let net = rc::multiply_network(d, eps_of()?).map_err(param_err)?;
            sup(net, Box::new(|x| x[0] * x[1]), dom(vec![(-d, d); 2])?)
        }
        "polynomial" => {
            if params.coeffs.is_empty() {
                return Err(CliError::Usage("polynomial needs --coeffs".into()));
            }
            let c = params.coeffs.clone();
            let net = rc::polynomial_network(&c, d, eps_of()?).map_err(param_err)?;
            let f = move |x: &[f64]| c.iter().rev().fold(0.0, |acc, &ci| acc * x[0] + ci);
            sup(net, Box::new(f), dom(vec![(-d, d)])?)
        }
        "cosine" => {
            let a = Params::need(params.a, "a")?;
            let b = params.b.unwrap_or(0.0);
            let net = rc::cosine_shifted_network(a, b, d, eps_of()?).map_err(param_err)?;
            sup(net, Box::new(move |x| (a * x[0] - b).cos()), dom(vec![(-d, d)])?)
        }
        "sine" => {
            let a = Params::need(params.a, "a")?;
            let net = rc::sine_network(a, d, eps_of()?).map_err(param_err)?;
            sup(net, Box::new(move |x| (a * x[0]).sin()), dom(vec![(-d, d)])?)
        }
        "weierstrass" => {
            let (p, a) = (Params::need(params.p, "p")?, Params::need(params.a, "a")?);
            let net = rc::weierstrass_network(p, a, d, eps_of()?).map_err(param_err)?;
            sup(net, Box::new(move |x| weierstrass_reference(p, a, x[0])), dom(vec![(-d, d)])?)
        }
        "bspline" => {
            let m = Params::need(params.m, "m")?;
            let net = rc::bspline_network(m, eps_of()?).map_err(param_err)?;
            sup(net, Box::new(move |x| rc::bspline_value(m, x[0])), dom(vec![(-2.0, m as f64 + 2.0)])?)
        }
        "wavelet" => {
            let m = Params::need(params.m, "m")?;
            let net = rc::spline_wavelet_network(m, eps_of()?).map_err(param_err)?;
            let hi = 2.0 * m as f64 + 1.0;
            sup(net, Box::new(move |x| rc::spline_wavelet_value(m, x[0])), dom(vec![(-2.0, hi)])?)
        }
        "haar" => {
            let n = Params::need(params.s, "s")? as u32;
            let k = params.k.unwrap_or(0) as u64;
            let net = rc::haar_element_network(n, k, eps_of()?).map_err(param_err)?;
            let scale = 2f64.powi(n as i32);
            let f = move |x: &[f64]| scale.sqrt() * rc::haar_mother(scale * x[0] - k as f64);
            Built { net, reference: Box::new(f), domain: dom(vec![(0.0, 1.0)])?, norm: Norm::L2 }
        }
        "gaussian" => {
            let dim = params.dim.unwrap_or(1);
            let e = eps_of()?;
            let net = rc::gaussian_network(dim, e).map_err(param_err)?;
            let r = rc::gaussian_cutoff_radius(e) + 2.0;
            let f = |x: &[f64]| (-x.iter().map(|v| v * v).sum::<f64>()).exp();
            sup(net, Box::new(f), dom(vec![(-r, r); dim])?)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown constructor `{other}`; expected one of {}",
                CONSTRUCTORS.join(", ")
            )))
        }
    })
}

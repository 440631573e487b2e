//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each and exits nonzero if any failed.
//!
//! Reference values come from oracles written here: Horner sums, a
//! Cox–de Boor recursion for cardinal B-splines, a 60-term Weierstrass sum
//! and closed forms.

use std::f64::consts::{PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relu_analysis::{
    count_composed_regions, count_linear_regions, cover_interval, error_report, exact_pwl, min_pieces,
    pack_exp_family, pack_interval, Domain,
};
use relu_constructors as rc;
use relu_constructors::SmoothDescriptor;
use relu_core::Network;
use relu_quantcode::{minimal_k, quantize_network};
use relucalc::commands::{codec_network, deviation};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Frozen regression constant: multiply depth ≤ C (log2⌈D⌉ + log2(1/eps)).
const MULTIPLY_DEPTH_C: f64 = 3.0;
/// Frozen regression line: cosine depth ≤ c0 + c1 ((log2(1/eps))² + log2⌈aD⌉).
const COSINE_DEPTH: (f64, f64) = (20.0, 3.6);

fn sup_on(net: &Network, f: impl Fn(&[f64]) -> f64, bounds: Vec<(f64, f64)>, grid_n: usize) -> f64 {
    let dom = Domain::new(bounds).expect("domain");
    error_report(net, &f, &dom, grid_n).expect("error report").sup_error
}

fn desc(f: impl Fn(f64) -> f64 + Send + Sync + 'static, a: f64, b: f64) -> SmoothDescriptor {
    SmoothDescriptor::new(f, a, b, "oracle").expect("descriptor")
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Cardinal B-spline by the Cox–de Boor recursion.
fn cox_de_boor(m: usize, x: f64) -> f64 {
    if m == 1 {
        return if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
    }
    let k = (m - 1) as f64;
    (x * cox_de_boor(m - 1, x) + (m as f64 - x) * cox_de_boor(m - 1, x - 1.0)) / k
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn wavelet_oracle(m: usize, x: f64) -> f64 {
    (1..=3 * m - 1)
        .map(|n| {
            let s: f64 = (0..=m).map(|j| binom(m, j) * cox_de_boor(2 * m, n as f64 - j as f64)).sum();
            let q = if n % 2 == 1 { s } else { -s } / 2f64.powi(m as i32 - 1);
            q * cox_de_boor(m, 2.0 * x - n as f64 + 1.0)
        })
        .sum()
}

fn weierstrass_oracle(p: f64, a: f64, x: f64) -> f64 {
    (0..60).map(|k| p.powi(k) * (a.powi(k) * PI * x).cos()).sum()
}

/// `g_s` on `[0, 1]`: a triangle wave with `2^(s-1)` teeth.
fn sawtooth_oracle(s: u32, x: f64) -> f64 {
    let t = x * 2f64.powi(s as i32);
    let k = t.floor();
    let frac = t - k;
    if (k as i64) % 2 == 0 {
        frac
    } else {
        1.0 - frac
    }
}

fn criterion_1() -> Outcome {
    for m in 1..=10 {
        let net = rc::square_network_m(m).map_err(|e| e.to_string())?;
        let err = sup_on(&net, |x| x[0] * x[0], vec![(0.0, 1.0)], 2049);
        let want = 2f64.powi(-2 * m as i32 - 2);
        ensure!((err - want).abs() <= 1e-12, "m = {m}: error {err:e}, expected {want:e}");
        let mt = net.metrics();
        ensure!(mt.width == 3, "m = {m}: width {}", mt.width);
        ensure!(mt.weight_magnitude <= 1.0, "m = {m}: magnitude {}", mt.weight_magnitude);
        ensure!(net.eval1(0.0) == 0.0, "m = {m}: Φ(0) = {}", net.eval1(0.0));
    }
    Ok("m = 1..10 tight to 1e-12, width 3".into())
}

fn criterion_2() -> Outcome {
    let mut worst_ratio = 0.0f64;
    for d in [1.0, 4.0, 1000.0] {
        for eps in [1e-1, 1e-3, 1e-6] {
            let net = rc::multiply_network(d, eps).map_err(|e| e.to_string())?;
            let err = sup_on(&net, |x| x[0] * x[1], vec![(-d, d); 2], 513);
            ensure!(err <= eps, "D = {d}, eps = {eps}: error {err:e}");
            for i in 0..=512 {
                let x = -d + 2.0 * d * i as f64 / 512.0;
                let a = net.evaluate(&[0.0, x]).map_err(|e| e.to_string())?[0];
                let b = net.evaluate(&[x, 0.0]).map_err(|e| e.to_string())?[0];
                ensure!(a == 0.0 && b == 0.0, "D = {d}, eps = {eps}: Φ(0,{x}) = {a}, Φ({x},0) = {b}");
            }
            let mt = net.metrics();
            ensure!(mt.weight_magnitude <= 1.0, "D = {d}, eps = {eps}: magnitude {}", mt.weight_magnitude);
            let scale = d.ceil().log2() + (1.0 / eps).log2();
            ensure!(
                mt.depth as f64 <= MULTIPLY_DEPTH_C * scale,
                "D = {d}, eps = {eps}: depth {} above {MULTIPLY_DEPTH_C}·{scale:.2}",
                mt.depth
            );
            worst_ratio = worst_ratio.max(mt.depth as f64 / scale);
        }
    }
    Ok(format!("9 cases, max depth/(log⌈D⌉+log(1/eps)) = {worst_ratio:.3} ≤ {MULTIPLY_DEPTH_C}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let deg = rng.gen_range(0..=10usize);
        let c: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let d = rng.gen_range(1..=4) as f64;
        let eps = if case % 2 == 0 { 1e-2 } else { 1e-3 };
        let net = rc::polynomial_network(&c, d, eps).map_err(|e| e.to_string())?;
        let cc = c.clone();
        let err = sup_on(&net, move |x| horner(&cc, x[0]), vec![(-d, d)], 20_001);
        ensure!(err <= eps, "case {case} (degree {deg}, D = {d}, eps = {eps}): error {err:e}");
        let w = net.metrics().width;
        ensure!(w <= 9, "case {case}: width {w}");
        worst = worst.max(err / eps);
    }
    let f = desc(|x| 1.0 / (2.0 - x), -1.0, 1.0);
    for j in 2..=6 {
        let eps = 10f64.powi(-j);
        let net = rc::smooth_network(&f, eps).map_err(|e| e.to_string())?;
        let err = sup_on(&net, |x| 1.0 / (2.0 - x[0]), vec![(-1.0, 1.0)], 100_001);
        ensure!(err <= eps, "1/(2-x), eps = {eps}: error {err:e}");
    }
    Ok(format!("50 polynomials (max error/eps {worst:.3}), 1/(2-x) down to eps = 1e-6"))
}

fn criterion_4() -> Outcome {
    let (c0, c1) = COSINE_DEPTH;
    let mut n = 0;
    for a in [1.0, 10.0, 1e3, 1e4] {
        for d in [1.0, 10.0] {
            for eps in [1e-2, 1e-4] {
                let net = rc::cosine_network(a, d, eps).map_err(|e| e.to_string())?;
                let periods = a * 2.0 * d / (2.0 * PI);
                let grid = ((20.0 * periods) as usize).max(100_001);
                let err = sup_on(&net, move |x| (a * x[0]).cos(), vec![(-d, d)], grid);
                ensure!(err <= eps, "a = {a}, D = {d}, eps = {eps}: error {err:e}");
                let mt = net.metrics();
                ensure!(mt.width <= 9, "a = {a}, D = {d}, eps = {eps}: width {}", mt.width);
                let x = (1.0 / eps).log2().powi(2) + (a * d).ceil().log2();
                ensure!(
                    mt.depth as f64 <= c0 + c1 * x,
                    "a = {a}, D = {d}, eps = {eps}: depth {} above {c0} + {c1}·{x:.2}",
                    mt.depth
                );
                n += 1;
            }
        }
    }
    Ok(format!("{n} cases, width ≤ 9, depth ≤ {c0} + {c1}·X"))
}

fn criterion_5() -> Outcome {
    for (p, a) in [(0.4, 3.0), (0.45, 5.0)] {
        for eps in [1e-2, 1e-3] {
            let n = (2.0f64 / eps).log2().ceil() as usize;
            ensure!(rc::weierstrass_terms(eps) == n, "eps = {eps}: N = {}, expected {n}", rc::weierstrass_terms(eps));
            let blocks = rc::weierstrass_blocks(p, a, 1.0, eps).map_err(|e| e.to_string())?;
            ensure!(blocks.len() == n + 1, "eps = {eps}: {} blocks for terms 0..={n}", blocks.len());
            let net = rc::weierstrass_network(p, a, 1.0, eps).map_err(|e| e.to_string())?;
            let err = sup_on(&net, move |x| weierstrass_oracle(p, a, x[0]), vec![(-1.0, 1.0)], 100_001);
            ensure!(err <= eps, "(p, a) = ({p}, {a}), eps = {eps}: error {err:e}");
            let w = net.metrics().width;
            ensure!(w <= 13, "(p, a) = ({p}, {a}), eps = {eps}: width {w}");
        }
    }
    Ok("4 cases, N_eps = ⌈log2(2/eps)⌉, width ≤ 13".into())
}

fn criterion_6() -> Outcome {
    let eps = 1e-3;
    for m in 2..=4 {
        let net = rc::bspline_network(m, eps).map_err(|e| e.to_string())?;
        let err = sup_on(&net, move |x| cox_de_boor(m, x[0]), vec![(-2.0, m as f64 + 2.0)], 100_001);
        ensure!(err <= eps, "N_{m}: error {err:e}");
        for x in [-10.0, 10.0] {
            ensure!(net.eval1(x).abs() <= eps, "N_{m}({x}) = {}", net.eval1(x));
        }
        let net = rc::spline_wavelet_network(m, eps).map_err(|e| e.to_string())?;
        let hi = 2.0 * m as f64 + 1.0;
        let err = sup_on(&net, move |x| wavelet_oracle(m, x[0]), vec![(-2.0, hi)], 100_001);
        ensure!(err <= eps, "ψ_{m}: error {err:e}");
        for x in [-10.0, 10.0] {
            ensure!(net.eval1(x).abs() <= eps, "ψ_{m}({x}) = {}", net.eval1(x));
        }
    }
    let q = rc::spline_wavelet_coeffs(1);
    ensure!(q == [1.0, -1.0], "coefficients for m = 1: {q:?}");
    Ok(format!("m = 2..4 at eps = {eps}, tails at ±10 within eps, q(1) = (1, -1)"))
}

fn criterion_7() -> Outcome {
    for d in [1usize, 2] {
        for eps in [1e-2, 1e-3] {
            let net = rc::gaussian_network(d, eps).map_err(|e| e.to_string())?;
            let r = rc::gaussian_cutoff_radius(eps);
            let lim = r + 2.0;
            let grid = if d == 1 { 100_001 } else { 401 };
            let err = sup_on(&net, |x| (-x.iter().map(|v| v * v).sum::<f64>()).exp(), vec![(-lim, lim); d], grid);
            ensure!(err <= eps, "d = {d}, eps = {eps}: error {err:e}");
            // outside the cutoff support [-R-1, R+1]^d the output is exactly 0
            let k: usize = 201;
            let axis: Vec<f64> = (0..k).map(|i| -lim - 2.0 + (2.0 * lim + 4.0) * i as f64 / (k - 1) as f64).collect();
            let mut pts = Vec::new();
            for i in 0..k.pow(d as u32) {
                let x: Vec<f64> = (0..d).map(|j| axis[(i / k.pow(j as u32)) % k]).collect();
                if x.iter().any(|v| v.abs() >= r + 1.0) {
                    pts.extend(x);
                }
            }
            let ys = net.evaluate_batch(&pts).map_err(|e| e.to_string())?;
            let bad = ys.iter().filter(|&&y| y != 0.0).count();
            ensure!(bad == 0, "d = {d}, eps = {eps}: {bad} nonzero outputs beyond the cutoff");
        }
    }
    Ok("d = 1, 2 at eps = 1e-2, 1e-3; exact zeros beyond R + 1".into())
}

fn criterion_8() -> Outcome {
    let (a, d, eps) = (100.0, 1.0, 1e-2);
    let g = desc(|x| 1.0 / (2.0 - x), -1.0, 1.0);
    let h = desc(|x| 1.0 / (2.0 + x), -1.0, 1.0);
    let net = rc::oscillatory_network(&g, &h, a, d, eps).map_err(|e| e.to_string())?;
    let err = sup_on(&net, move |x| (a / (2.0 - x[0])).cos() / (2.0 + x[0]), vec![(-d, d)], 100_001);
    ensure!(err <= eps, "error {err:e}");
    let w = net.metrics().width;
    ensure!(w <= 32, "width {w}");
    Ok(format!("error {err:.3e}, width {w}"))
}

fn criterion_9() -> Outcome {
    let cases: Vec<(&str, Network, f64, f64)> = vec![
        ("square 1e-2", rc::square_network(1e-2).map_err(|e| e.to_string())?, 1.0, 1e-2),
        ("square 1e-4", rc::square_network(1e-4).map_err(|e| e.to_string())?, 1.0, 1e-4),
        ("multiply D=1", rc::multiply_network(1.0, 1e-2).map_err(|e| e.to_string())?, 1.0, 1e-2),
        ("multiply D=4", rc::multiply_network(4.0, 1e-3).map_err(|e| e.to_string())?, 4.0, 1e-3),
        ("cosine a=10", rc::cosine_network(10.0, 1.0, 1e-2).map_err(|e| e.to_string())?, 1.0, 1e-2),
        ("cosine a=100", rc::cosine_network(100.0, 1.0, 1e-3).map_err(|e| e.to_string())?, 1.0, 1e-3),
    ];
    let mut lines = Vec::new();
    for (name, net, d, eps) in cases {
        let k = minimal_k(&net, eps).map_err(|e| e.to_string())?;
        let (q, _) = quantize_network(&net, k, d, eps).map_err(|e| e.to_string())?;
        let dev = deviation(&q, &net, d, 20_001).map_err(|e| e.to_string())?;
        ensure!(dev <= eps, "{name}: k = {k}, deviation {dev:e} > {eps}");
        lines.push(format!("{name} k={k}"));
    }
    Ok(lines.join(", "))
}

/// Constructor outputs with the half-width of a cube holding their domain.
fn corpus() -> Result<Vec<(String, Network, f64)>, String> {
    let e = |r: relu_core::Result<Network>| r.map_err(|e| e.to_string());
    let one_over = desc(|x| 1.0 / (2.0 - x), -1.0, 1.0);
    let g1 = e(rc::gaussian_network(1, 0.3))?;
    let (mc, ms) = rc::modulated_network(&g1, 1.0, &[1.0], 1.0, 0.3).map_err(|e| e.to_string())?;
    let h = desc(|x| 1.0 / (2.0 + x), -1.0, 1.0);
    let mut c = vec![
        ("hat".to_string(), rc::hat_network(), 1.0),
        ("sawtooth 6".into(), rc::sawtooth_network(6), 1.0),
        ("square 1e-2".into(), e(rc::square_network(1e-2))?, 1.0),
        ("multiply 1e-2".into(), e(rc::multiply_network(1.0, 1e-2))?, 1.0),
        ("polynomial".into(), e(rc::polynomial_network(&[0.5, -1.0, 0.25, 0.75], 2.0, 1e-2))?, 2.0),
        ("smooth 1/(2-x)".into(), e(rc::smooth_network(&one_over, 1e-2))?, 1.0),
        ("cosine 10".into(), e(rc::cosine_network(10.0, 1.0, 1e-2))?, 1.0),
        ("sine 5".into(), e(rc::sine_network(5.0, 1.0, 1e-2))?, 1.0),
        ("weierstrass".into(), e(rc::weierstrass_network(0.4, 3.0, 1.0, 0.3))?, 1.0),
        ("bspline 2".into(), e(rc::bspline_network(2, 1e-2))?, 4.0),
        ("wavelet 2".into(), e(rc::spline_wavelet_network(2, 1e-2))?, 5.0),
        ("haar 2,1".into(), e(rc::haar_element_network(2, 1, 0.1))?, 1.0),
        ("cutoff".into(), e(rc::cutoff_network(2.0, 2))?, 4.0),
        ("gaussian d=1".into(), g1, 3.0),
        ("gaussian d=2".into(), e(rc::gaussian_network(2, 0.3))?, 3.0),
        ("modulated cos".into(), mc, 3.0),
        ("modulated sin".into(), ms, 3.0),
        ("oscillatory".into(), e(rc::oscillatory_network(&one_over, &h, 2.0, 1.0, 0.3))?, 1.0),
    ];
    for s in [1, 3, 9] {
        c.push((format!("sawtooth {s}"), rc::sawtooth_network(s), 1.0));
    }
    Ok(c)
}

fn criterion_10() -> Outcome {
    let eps_q = 0.25;
    let corpus = corpus()?;
    let mut total_bits = 0u64;
    for (name, net, d) in &corpus {
        let (r, _, _) = codec_network(net, None, *d, eps_q, 1001).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.round_trip, "{name}: decoded network differs from the quantized one");
        ensure!(r.bits <= r.bound, "{name}: {} bits above the bound {}", r.bits, r.bound);
        total_bits += r.bits;
    }
    Ok(format!("{} networks round-trip bit-exactly within the bound ({total_bits} bits)", corpus.len()))
}

fn criterion_11() -> Outcome {
    for s in 1..=12u32 {
        let net = rc::sawtooth_network(s as usize);
        let r = count_linear_regions(&net, 0.0, 1.0).map_err(|e| e.to_string())?;
        ensure!(r.regions == 1u64 << s, "s = {s}: {} regions", r.regions);
        let pwl = exact_pwl(&net, 0.0, 1.0).map_err(|e| e.to_string())?;
        for (&x, &y) in pwl.knots().iter().zip(pwl.values()) {
            ensure!((y - sawtooth_oracle(s, x)).abs() <= 1e-12, "s = {s}: value {y} at knot {x}");
        }
    }
    // one-dimensional part of the corpus, on a subinterval for the deep ones
    let mut checked = 0;
    for (name, net, d) in corpus()? {
        if net.in_dim() != 1 || net.out_dim() != 1 {
            continue;
        }
        let half = if net.depth() > 200 { 0.25 } else { d };
        let r = count_linear_regions(&net, -half, half).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.within_bound(), "{name}: {} regions above (2·{})^{}", r.regions, r.width, r.depth);
        checked += 1;
    }
    Ok(format!("sawtooth s = 1..12 exact; {checked} corpus networks within (2W)^L"))
}

fn criterion_12() -> Outcome {
    let target = SQRT_2 / 4.0;
    let mut parts = Vec::new();
    for eps in [1e-4, 1e-5, 1e-6] {
        let n = min_pieces(&|x| x * x, 0.0, 1.0, eps, 1_000_001).map_err(|e| e.to_string())?;
        let v = n as f64 * eps.sqrt();
        ensure!((v - target).abs() <= 0.15 * target, "eps = {eps}: {n} pieces, {v:.4} vs {target:.4}");
        parts.push(format!("{v:.4}"));
    }
    // composing the two factors counts the regions without materializing
    // the composed breakpoints
    let a = 2f64.powi(14);
    let (outer, inner) = rc::cosine_network_factors(a, 1.0, 1e-2).map_err(|e| e.to_string())?;
    let ip = exact_pwl(&inner, -1.0, 1.0).map_err(|e| e.to_string())?;
    let op = exact_pwl(&outer, 0.0, 1.0).map_err(|e| e.to_string())?;
    let count = count_composed_regions(&op, &ip).map_err(|e| e.to_string())?;
    let bound = (2.0 * a.log2().powi(2)).powi(3) as u64;
    ensure!(count > bound, "a = 2^14: {count} regions, not above {bound}");
    Ok(format!("pieces·√eps = {} (target {target:.4}); cos(2^14 x) has {count} > {bound} regions", parts.join("/")))
}

fn criterion_13() -> Outcome {
    let c = cover_interval(0.1).map_err(|e| e.to_string())?;
    ensure!(c.len() == 11, "cover at 0.1 has {} centers", c.len());
    let t = pack_exp_family(0.1).map_err(|e| e.to_string())?.len() - 1;
    ensure!(t == 6, "T = {t} at 0.1");
    let mut parts = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let m2 = pack_interval(2.0 * eps).map_err(|e| e.to_string())?.len();
        let n = cover_interval(eps).map_err(|e| e.to_string())?.len();
        let m1 = pack_interval(eps).map_err(|e| e.to_string())?.len();
        ensure!(m2 <= n && n <= m1, "eps = {eps}: {m2} ≤ {n} ≤ {m1} fails");
        parts.push(format!("{m2}≤{n}≤{m1}"));
    }
    Ok(format!("11 centers, T = 6; sandwich {}", parts.join(", ")))
}

fn main() {
    let criteria: [fn() -> Outcome; 13] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
        criterion_13,
    ];
    let mut failed = 0;
    for (i, run) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS ({secs:.1}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL ({secs:.1}s) {detail}", i + 1);
            }
        }
    }
    println!("{} of 13 criteria passed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relu_analysis::*;
use relu_constructors::{
    cosine_network, cosine_network_factors, hat_network, sawtooth_network, sawtooth_value, square_network_m,
};
use relu_core::calculus::concat_relu;
use relu_core::{Layer, Network};

#[test]
fn hat_breakpoints() {
    let f = exact_pwl(&hat_network(), -1.0, 2.0).unwrap();
    assert_eq!(f.breakpoints(), &[0.0, 0.5, 1.0]);
    assert_eq!(f.pieces(), 4);
    assert_eq!(f.slopes(), vec![0.0, 2.0, -2.0, 0.0]);
}

#[test]
fn iterated_hat_and_affine() {
    let g2 = concat_relu(&hat_network(), &hat_network()).unwrap();
    assert_eq!(exact_pwl(&g2, 0.0, 1.0).unwrap().pieces(), 4);
    let affine = Network::from_layer(Layer::from_f64_rows(&[&[3.0]], &[-1.0]).unwrap());
    assert_eq!(exact_pwl(&affine, -5.0, 5.0).unwrap().pieces(), 1);
    let two_in = Network::from_layer(Layer::zeros(1, 2));
    assert!(matches!(exact_pwl(&two_in, 0.0, 1.0), Err(AnalysisError::Dimension { .. })));
    assert!(matches!(exact_pwl(&affine, 1.0, 0.0), Err(AnalysisError::EmptyDomain(_))));
}

#[test]
fn pwl_agrees_with_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for net in [sawtooth_network(7), square_network_m(6).unwrap(), cosine_network(40.0, 1.0, 1e-2).unwrap()] {
        let f = exact_pwl(&net, -1.0, 1.0).unwrap();
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(-1.0..=1.0);
            assert!((f.eval(x) - net.eval1(x)).abs() <= 1e-9, "x = {x}");
        }
        for &x in f.knots() {
            assert!((f.eval(x) - net.eval1(x)).abs() <= 1e-9);
        }
    }
}

#[test]
fn sawtooth_regions() {
    for s in 1..=12 {
        let r = count_linear_regions(&sawtooth_network(s), 0.0, 1.0).unwrap();
        assert_eq!(r.regions, 1 << s, "s = {s}");
        assert!(r.within_bound());
        // closed form of g_s: the breakpoints are the multiples of 2^{-s}
        let f = exact_pwl(&sawtooth_network(s), 0.0, 1.0).unwrap();
        for (i, &x) in f.knots().iter().enumerate() {
            assert!((x - i as f64 / (1 << s) as f64).abs() < 1e-12);
            assert!((f.values()[i] - sawtooth_value(s as u32, x)).abs() < 1e-12);
        }
    }
}

#[test]
fn sawtooth_bound_and_constant() {
    let r = count_linear_regions(&sawtooth_network(3), 0.0, 1.0).unwrap();
    assert_eq!((r.width, r.depth), (3, 4));
    assert_eq!(r.bound(), 6f64.powi(4));
    let constant = Network::new(vec![
        Layer::from_f64_rows(&[&[0.0], &[0.0]], &[1.0, 2.0]).unwrap(),
        Layer::from_f64_rows(&[&[1.0, 1.0]], &[0.0]).unwrap(),
    ])
    .unwrap();
    assert_eq!(count_linear_regions(&constant, -3.0, 3.0).unwrap().regions, 1);
}

#[test]
fn composed_count_matches_direct_count() {
    for a in [5.0, 7.0] {
        let (outer, inner) = cosine_network_factors(a, 1.0, 1e-2).unwrap();
        let ip = exact_pwl(&inner, -1.0, 1.0).unwrap();
        let op = exact_pwl(&outer, 0.0, 1.0).unwrap();
        let streamed = count_composed_regions(&op, &ip).unwrap();
        let direct = count_linear_regions(&cosine_network(a, 1.0, 1e-2).unwrap(), -1.0, 1.0).unwrap().regions;
        assert_eq!(streamed, direct, "a = {a}");
    }
    // steeper inner maps shrink the narrowest outer pieces below the merge
    // tolerance, so the direct count can only lose a few of them
    let (outer, inner) = cosine_network_factors(100.0, 1.0, 1e-2).unwrap();
    let streamed = count_composed_regions(&exact_pwl(&outer, 0.0, 1.0).unwrap(), &exact_pwl(&inner, -1.0, 1.0).unwrap()).unwrap();
    let direct = count_linear_regions(&cosine_network(100.0, 1.0, 1e-2).unwrap(), -1.0, 1.0).unwrap().regions;
    assert!(direct <= streamed && (streamed - direct) as f64 <= 1e-3 * streamed as f64, "{direct} vs {streamed}");
}

#[test]
fn error_report_examples() {
    let sq = square_network_m(1).unwrap();
    let dom = Domain::interval(0.0, 1.0).unwrap();
    let r = sup_error(&sq, &|x| x[0] * x[0], &dom, 1001).unwrap();
    assert!((r.sup_error - 1.0 / 16.0).abs() <= 1e-12);
    assert!(r.breakpoints_included);
    let g = hat_network();
    let far = Domain::interval(2.0, 3.0).unwrap();
    assert_eq!(l2_error(&g, &|_| 0.0, &far, 101).unwrap().sup_error, 0.0);
    // the network sampled against itself
    let r = error_report(&g, &|x| g.eval1(x[0]), &Domain::interval(-1.0, 2.0).unwrap(), 1000).unwrap();
    assert!(r.sup_error <= 1e-12 && r.l2_error <= 1e-12);
    assert!(matches!(error_report(&g, &|_| 0.0, &dom, 1), Err(AnalysisError::Argument(_))));
}

#[test]
fn l2_error_of_the_first_square_step() {
    // the error is x/2 - x^2 on [0, 1/2], mirrored on [1/2, 1]
    let sq = square_network_m(1).unwrap();
    let r = error_report(&sq, &|x| x[0] * x[0], &Domain::interval(0.0, 1.0).unwrap(), 20_001).unwrap();
    let exact = (2.0f64 * (1.0 / 960.0)).sqrt();
    assert!((r.l2_error - exact).abs() < 1e-8, "{} vs {exact}", r.l2_error);
}

#[test]
fn min_pieces_examples() {
    assert_eq!(min_pieces(&|x| 3.0 * x - 2.0, 0.0, 1.0, 1e-6, 10_001).unwrap(), 1);
    assert_eq!(min_pieces(&|x| x.sin(), 0.0, 1.0, 10.0, 1001).unwrap(), 1);
    let n = min_pieces(&|x| x * x, 0.0, 1.0, 1e-4, 100_001).unwrap();
    assert!((34..=38).contains(&n), "{n}");
    assert!(matches!(min_pieces(&|x| x * x, 0.0, 1.0, 1e-6, 1001), Err(AnalysisError::Resolution { .. })));
}

#[test]
fn frenzen_examples() {
    let c = frenzen_constant(&|_| 2.0, 0.0, 1.0).unwrap();
    assert!((c - 2f64.sqrt() / 4.0).abs() <= 1e-8 * c);
    assert_eq!(frenzen_constant(&|_| 0.0, 0.0, 1.0).unwrap(), 0.0);
    // fine midpoint rule as an independent reference
    let n = 4_000_000;
    let h = std::f64::consts::PI / n as f64;
    let reference: f64 = (0..n).map(|i| ((i as f64 + 0.5) * h).cos().abs().sqrt()).sum::<f64>() * h / 4.0;
    let c = frenzen_constant(&|x: f64| -x.cos(), 0.0, std::f64::consts::PI).unwrap();
    assert!((c - reference).abs() <= 1e-7 * reference, "{c} vs {reference}");
}

#[test]
fn covering_and_packing_examples() {
    let c = cover_interval(0.1).unwrap();
    assert_eq!(c.len(), 11);
    assert_eq!(c[0], -1.0);
    assert!((c[10] - 1.0).abs() < 1e-12);
    let t = pack_exp_family(0.1).unwrap();
    assert_eq!(t.len(), 7);
    assert_eq!(t[0], 0.0);
    for i in 0..t.len() {
        for j in 0..t.len() {
            let d = ((-t[i]).exp() - (-t[j]).exp()).abs();
            assert!((d - 0.1 * (i as f64 - j as f64).abs()).abs() < 1e-12);
        }
    }
    assert!(matches!(cover_interval(1.5), Err(AnalysisError::Argument(_))));
}

use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;
use relu_constructors::*;
use relu_core::Network;

fn mult4() -> &'static Network {
    static NET: OnceLock<Network> = OnceLock::new();
    NET.get_or_init(|| multiply_network(4.0, 1e-4).unwrap())
}

fn cos_net() -> &'static Network {
    static NET: OnceLock<Network> = OnceLock::new();
    NET.get_or_init(|| cosine_network(37.0, 2.0, 1e-3).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiply_error_and_exact_zeros(x in -4.0..4.0f64, y in -4.0..4.0f64) {
        let net = mult4();
        let v = net.evaluate(&[x, y]).unwrap()[0];
        prop_assert!((v - x * y).abs() <= 1e-4);
        prop_assert_eq!(net.evaluate(&[0.0, y]).unwrap()[0], 0.0);
        prop_assert_eq!(net.evaluate(&[x, 0.0]).unwrap()[0], 0.0);
        prop_assert_eq!(net.evaluate(&[-x, -y]).unwrap()[0], v);
    }

    #[test]
    fn square_interpolates_on_dyadic_nodes(m in 1usize..8, j in 0u32..=128) {
        let net = square_network_m(m).unwrap();
        let step = 2f64.powi(-(m as i32));
        let x = (j as f64 / 128.0 / step).floor() * step;
        prop_assert_eq!(net.eval1(x), x * x);
        let y = j as f64 / 128.0;
        prop_assert!((net.eval1(y) - y * y).abs() <= 2f64.powi(-2 * m as i32 - 2) + 1e-15);
    }

    #[test]
    fn polynomial_error(coeffs in prop::collection::vec(-1.0..1.0f64, 1..6), d in 0.5..3.0f64, t in -1.0..1.0f64) {
        let net = polynomial_network(&coeffs, d, 1e-3).unwrap();
        let x = t * d;
        let want = coeffs.iter().rev().fold(0.0, |s, c| s * x + c);
        prop_assert!((net.eval1(x) - want).abs() <= 1e-3);
        prop_assert!(net.metrics().width <= 9);
        prop_assert!(net.metrics().weight_magnitude <= 1.0);
    }

    #[test]
    fn sawtooth_matches_closed_form(s in 1usize..10, x in -0.5..1.5f64) {
        let net = sawtooth_network(s);
        // g_s(x) = 2 dist(2^{s-1} x, Z) on [0, 1], 0 elsewhere
        let want = if (0.0..=1.0).contains(&x) {
            let t = x * 2f64.powi(s as i32 - 1);
            2.0 * (t - t.round()).abs()
        } else {
            0.0
        };
        prop_assert!((net.eval1(x) - want).abs() <= 1e-12);
    }

    #[test]
    fn cosine_is_even_and_accurate(x in -2.0..2.0f64) {
        let net = cos_net();
        prop_assert_eq!(net.eval1(x), net.eval1(-x));
        prop_assert!((net.eval1(x) - (37.0 * x).cos()).abs() <= 1e-3);
    }

    #[test]
    fn cutoff_between_zero_and_one(y in 0.1..3.0f64, t in prop::collection::vec(-5.0..5.0f64, 1..4)) {
        let net = cutoff_network(y, t.len()).unwrap();
        let v = net.evaluate(&t).unwrap()[0];
        prop_assert!((0.0..=1.0).contains(&v));
        if t.iter().all(|s| s.abs() <= y) {
            prop_assert_eq!(v, 1.0);
        }
        if t.iter().any(|s| s.abs() >= y + 1.0) {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn bsplines_form_a_partition_of_unity(m in 2usize..7, x in -3.0..3.0f64) {
        let s: f64 = (-10..=10).map(|k| bspline_value(m, x - k as f64)).sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_cosine_accuracy(b in -3.0..3.0f64, x in -1.0..1.0f64) {
        let net = cosine_shifted_network(2.0 * PI, b, 1.0, 1e-2).unwrap();
        prop_assert!((net.eval1(x) - (2.0 * PI * x - b).cos()).abs() <= 1e-2);
    }
}

#[test]
fn wavelet_coefficients_sum_to_zero() {
    for m in 1..=6 {
        let s: f64 = spline_wavelet_coeffs(m).iter().sum();
        assert!(s.abs() < 1e-12, "m = {m}: {s}");
    }
}

//! The hat function `g` and its iterates `g_s`.

use relu_core::{Layer, Network};

fn first_layer() -> Layer {
    Layer::from_f64_rows(&[&[1.0], &[1.0], &[1.0]], &[0.0, -0.5, -1.0]).unwrap()
}

/// `g(x) = 2ρ(x) - 4ρ(x - 1/2) + 2ρ(x - 1)`: the tent on `[0, 1]` with peak
/// `g(1/2) = 1`, zero outside.
pub fn hat_network() -> Network {
    sawtooth_network(1)
}

/// `g_s = g ∘ ... ∘ g` (s times) with width 3 and depth `s + 1`.
///
/// On `[0, 1]` this is the sawtooth with `2^{s-1}` teeth. Weights reach 4.
///
/// # Panics
/// If `s == 0`.
pub fn sawtooth_network(s: usize) -> Network {
    assert!(s >= 1, "sawtooth order must be at least 1");
    let mut layers = vec![first_layer()];
    let inner = Layer::from_f64_rows(&[&[2.0, -4.0, 2.0], &[2.0, -4.0, 2.0], &[2.0, -4.0, 2.0]], &[0.0, -0.5, -1.0]).unwrap();
    for _ in 1..s {
        layers.push(inner.clone());
    }
    layers.push(Layer::from_f64_rows(&[&[2.0, -4.0, 2.0]], &[0.0]).unwrap());
    Network::new(layers).unwrap()
}

/// `g_s(x)` for `x ∈ [0, 1]` from the closed form: the distance of
/// `2^{s-1} x` to the nearest integer, doubled.
pub fn sawtooth_value(s: u32, x: f64) -> f64 {
    let t = x * 2f64.powi(s as i32 - 1);
    2.0 * (t - t.round()).abs()
}

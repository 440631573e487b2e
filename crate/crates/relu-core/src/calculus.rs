//! Building networks from networks.
//!
//! Every function here returns a new network; inputs are never modified.

use crate::{AffineLayer, NetError, ReluNetwork, Result, Scalar};

/// `[I, -I]`, shape `n × 2n`.
fn join<T: Scalar>(n: usize, bias: Vec<T>) -> AffineLayer<T> {
    let mut m = vec![T::zero(); 2 * n * n];
    for i in 0..n {
        m[i * 2 * n + i] = T::one();
        m[i * 2 * n + n + i] = -T::one();
    }
    AffineLayer::new(n, 2 * n, m, bias).expect("join shape")
}

/// Selection matrix with a single one per row: row `r` picks column `pick[r]`
/// (or is zero when `pick[r]` is `None`).
pub fn selection_layer<T: Scalar>(cols: usize, pick: &[Option<usize>]) -> AffineLayer<T> {
    let mut m = vec![T::zero(); pick.len() * cols];
    for (r, p) in pick.iter().enumerate() {
        if let Some(c) = p {
            m[r * cols + c] = T::one();
        }
    }
    AffineLayer::new(pick.len(), cols, m, vec![T::zero(); pick.len()]).expect("selection shape")
}

/// `outer ∘ inner`. The last layer of `inner` is doubled
/// into `[A; -A]` and the first layer of `outer` is fed `ρ(y) - ρ(-y)`.
pub fn compose<T: Scalar>(outer: &ReluNetwork<T>, inner: &ReluNetwork<T>) -> Result<ReluNetwork<T>> {
    let d2 = inner.out_dim();
    if outer.in_dim() != d2 {
        return Err(NetError::Dimension(format!(
            "outer network takes {} inputs, inner produces {d2}",
            outer.in_dim()
        )));
    }
    let mut layers: Vec<AffineLayer<T>> = inner.layers()[..inner.depth() - 1].to_vec();
    let last = inner.last();
    layers.push(last.vstack(&last.scaled(-T::one(), -T::one()))?);
    layers.push(join(d2, vec![T::zero(); d2]).then(outer.first())?);
    layers.extend(outer.layers()[1..].iter().cloned());
    ReluNetwork::new(layers)
}

/// `outer ∘ ρ ∘ inner`: plain concatenation of the layer lists.
pub fn concat_relu<T: Scalar>(outer: &ReluNetwork<T>, inner: &ReluNetwork<T>) -> Result<ReluNetwork<T>> {
    if outer.in_dim() != inner.out_dim() {
        return Err(NetError::Dimension(format!(
            "outer network takes {} inputs, inner produces {}",
            outer.in_dim(),
            inner.out_dim()
        )));
    }
    let mut layers = inner.layers().to_vec();
    layers.extend(outer.layers().iter().cloned());
    ReluNetwork::new(layers)
}

/// `net ∘ map` with the affine `map` merged into the first layer.
pub fn precompose_affine<T: Scalar>(net: &ReluNetwork<T>, map: &AffineLayer<T>) -> Result<ReluNetwork<T>> {
    let mut layers = net.layers().to_vec();
    layers[0] = map.then(&layers[0])?;
    ReluNetwork::new(layers)
}

/// `map ∘ net` with the affine `map` merged into the last layer.
pub fn postcompose_affine<T: Scalar>(map: &AffineLayer<T>, net: &ReluNetwork<T>) -> Result<ReluNetwork<T>> {
    let mut layers = net.layers().to_vec();
    let l = layers.len() - 1;
    layers[l] = layers[l].then(map)?;
    ReluNetwork::new(layers)
}

/// Same function realized with exactly `k` layers.
///
/// The last layer `(A, b)` becomes `[A; -A]` without bias, followed by
/// identity layers on the doubled channel and a final `[I, -I]` that
/// carries `b`. No weight exceeds `max(1, B)` and the values are
/// reproduced bit for bit.
pub fn extend_depth<T: Scalar>(net: &ReluNetwork<T>, k: usize) -> Result<ReluNetwork<T>> {
    let l = net.depth();
    if k <= l {
        return Err(NetError::Argument(format!("target depth {k} must exceed current depth {l}")));
    }
    let d2 = net.out_dim();
    let last = net.last();
    let a = AffineLayer::new(last.rows(), last.cols(), last.matrix().to_vec(), vec![T::zero(); d2])?;
    let mut layers: Vec<AffineLayer<T>> = net.layers()[..l - 1].to_vec();
    layers.push(a.vstack(&a.scaled(-T::one(), T::one()))?);
    for _ in 0..k - l - 1 {
        layers.push(AffineLayer::identity(2 * d2));
    }
    layers.push(join(d2, last.bias().to_vec()));
    ReluNetwork::new(layers)
}

/// Pads to depth `k`, returning a clone when the depth already matches.
pub fn pad_to_depth<T: Scalar>(net: &ReluNetwork<T>, k: usize) -> Result<ReluNetwork<T>> {
    if net.depth() == k {
        Ok(net.clone())
    } else {
        extend_depth(net, k)
    }
}

/// Pads every network to the largest depth in the list.
pub fn pad_to_common_depth<T: Scalar>(nets: &[ReluNetwork<T>]) -> Result<Vec<ReluNetwork<T>>> {
    let k = nets.iter().map(|n| n.depth()).max().ok_or(NetError::Empty)?;
    nets.iter().map(|n| pad_to_depth(n, k)).collect()
}

/// Identity on `R^d` as a network of the given depth.
pub fn identity_network<T: Scalar>(d: usize, depth: usize) -> ReluNetwork<T> {
    let id = ReluNetwork::from_layer(AffineLayer::identity(d));
    if depth <= 1 {
        id
    } else {
        extend_depth(&id, depth).expect("depth checked")
    }
}

fn check_depths<T: Scalar>(nets: &[ReluNetwork<T>]) -> Result<usize> {
    let l = nets.first().ok_or(NetError::Empty)?.depth();
    if let Some(n) = nets.iter().find(|n| n.depth() != l) {
        return Err(NetError::Depth(format!("depths {l} and {} differ; pad first", n.depth())));
    }
    Ok(l)
}

fn stacked<T: Scalar>(nets: &[ReluNetwork<T>], shared: bool) -> Result<ReluNetwork<T>> {
    let l = check_depths(nets)?;
    if shared {
        let d = nets[0].in_dim();
        if nets.iter().any(|n| n.in_dim() != d) {
            return Err(NetError::Dimension("shared input needs equal input dimensions".into()));
        }
    }
    let mut layers = Vec::with_capacity(l);
    for i in 0..l {
        let blocks: Vec<&AffineLayer<T>> = nets.iter().map(|n| &n.layers()[i]).collect();
        let layer = if i == 0 && shared {
            let mut acc = blocks[0].clone();
            for b in &blocks[1..] {
                acc = acc.vstack(b)?;
            }
            acc
        } else {
            AffineLayer::block_diag(&blocks)?
        };
        layers.push(layer);
    }
    ReluNetwork::new(layers)
}

/// `(x_1, ..., x_n) ↦ (Φ_1(x_1), ..., Φ_n(x_n))`.
pub fn parallelize<T: Scalar>(nets: &[ReluNetwork<T>]) -> Result<ReluNetwork<T>> {
    stacked(nets, false)
}

/// `x ↦ (Φ_1(x), ..., Φ_n(x))`.
pub fn parallelize_shared<T: Scalar>(nets: &[ReluNetwork<T>]) -> Result<ReluNetwork<T>> {
    stacked(nets, true)
}

fn combined<T: Scalar>(nets: &[ReluNetwork<T>], coeffs: &[T], shared: bool) -> Result<ReluNetwork<T>> {
    if nets.len() != coeffs.len() {
        return Err(NetError::Argument(format!("{} networks but {} coefficients", nets.len(), coeffs.len())));
    }
    let dout = nets.first().ok_or(NetError::Empty)?.out_dim();
    if nets.iter().any(|n| n.out_dim() != dout) {
        return Err(NetError::Dimension("linear combination needs equal output dimensions".into()));
    }
    let par = stacked(nets, shared)?;
    let n = nets.len();
    let mut c = vec![T::zero(); dout * dout * n];
    for (i, &a) in coeffs.iter().enumerate() {
        for r in 0..dout {
            c[r * dout * n + i * dout + r] = a;
        }
    }
    let comb = AffineLayer::new(dout, dout * n, c, vec![T::zero(); dout])?;
    postcompose_affine(&comb, &par)
}

/// `(x_1, ..., x_n) ↦ Σ a_i Φ_i(x_i)`.
pub fn linear_combination<T: Scalar>(nets: &[ReluNetwork<T>], coeffs: &[T]) -> Result<ReluNetwork<T>> {
    combined(nets, coeffs, false)
}

/// `x ↦ Σ a_i Φ_i(x)`.
pub fn linear_combination_shared<T: Scalar>(nets: &[ReluNetwork<T>], coeffs: &[T]) -> Result<ReluNetwork<T>> {
    combined(nets, coeffs, true)
}

/// `x ↦ 2^e x` on `R^d` for `e ≥ 1` with all weights in `[-1, 1]`.
///
/// Depth `e + 4`. The positive and negative parts are carried next to
/// their sum so every doubling step stays nonnegative.
pub fn power_of_two_mult_network<T: Scalar>(e: u32, d: usize) -> ReluNetwork<T> {
    doubling_chain(e, T::lit(0.5), d)
}

fn doubling_chain<T: Scalar>(k: u32, alpha: T, d: usize) -> ReluNetwork<T> {
    let mut layers = vec![
        AffineLayer::from_f64_rows(&[&[1.0], &[-1.0]], &[0.0, 0.0]).unwrap(),
        AffineLayer::from_f64_rows(&[&[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]], &[0.0; 3]).unwrap(),
    ];
    let dbl = AffineLayer::from_f64_rows(&[&[1.0, 1.0, -1.0], &[1.0, 1.0, 1.0], &[-1.0, 1.0, 1.0]], &[0.0; 3]).unwrap();
    for _ in 0..=k {
        layers.push(dbl.clone());
    }
    layers.push(AffineLayer::from_rows(&[vec![alpha, T::zero(), -alpha]], vec![T::zero()]).unwrap());
    let one = ReluNetwork::new(layers).unwrap();
    if d == 1 {
        one
    } else {
        parallelize(&vec![one; d]).unwrap()
    }
}

/// `x ↦ a x` on `R^d` with all weights in `[-1, 1]`.
pub fn scalar_mult_network<T: Scalar>(a: T, d: usize) -> ReluNetwork<T> {
    assert!(d > 0, "dimension must be positive");
    assert!(a.is_finite(), "scalar must be finite");
    if a.abs() <= T::one() {
        return ReluNetwork::from_layer(AffineLayer::scaled_identity(d, a));
    }
    let k = a.floor_log2();
    doubling_chain(k as u32, a * T::pow2(-(k + 1)), d)
}

/// `x ↦ A x + b` with all weights in `[-1, 1]`.
///
/// With `a` the largest absolute entry, the layer is divided by `a` and
/// followed by multiplication with `a`.
pub fn affine_network<T: Scalar>(layer: &AffineLayer<T>) -> ReluNetwork<T> {
    let a = layer.max_abs();
    if a <= T::one() {
        return ReluNetwork::from_layer(layer.clone());
    }
    let w = AffineLayer::new(
        layer.rows(),
        layer.cols(),
        layer.matrix().iter().map(|&v| v / a).collect(),
        layer.bias().iter().map(|&v| v / a).collect(),
    )
    .expect("shape unchanged");
    compose(&scalar_mult_network(a, layer.rows()), &ReluNetwork::from_layer(w)).expect("dimensions agree")
}

fn ceil_log2<T: Scalar>(b: T) -> i32 {
    let (mant, _, _) = b.integer_decode();
    let k = b.floor_log2();
    if mant & (mant - 1) == 0 {
        k
    } else {
        k + 1
    }
}

/// Same function with all weights in `[-1, 1]`.
///
/// Layer `ℓ` gets `A_ℓ / C` and `b_ℓ / C^ℓ` where `C = 2^⌈log2 B⌉`, and the
/// output is multiplied back by `C^L`. Scaling by a power of two keeps the
/// realized function identical bit for bit.
///
/// Fails only when `C^L` leaves the exponent range of `T`.
pub fn reduce_weights<T: Scalar>(net: &ReluNetwork<T>) -> Result<ReluNetwork<T>> {
    let b = net.metrics().weight_magnitude;
    if b <= T::one() {
        return Ok(net.clone());
    }
    let e = ceil_log2(b);
    let l = net.depth() as i32;
    let limit = T::max_value().floor_log2() - 64;
    if e.saturating_mul(l) > limit {
        return Err(NetError::Argument(format!(
            "rescaling by 2^({e}·{l}) exceeds the exponent range"
        )));
    }
    let inv = T::pow2(-e);
    let layers = net
        .layers()
        .iter()
        .enumerate()
        .map(|(i, layer)| layer.scaled(inv, T::pow2(-e * (i as i32 + 1))))
        .collect();
    let scaled = ReluNetwork::new(layers)?;
    compose(&power_of_two_mult_network((e * l) as u32, net.out_dim()), &scaled)
}

/// `Σ Φ_i` with width independent of the number of summands.
///
/// Summand `i` runs as `(x, y, z) ↦ (x, y, Φ_i(z))` beside identity channels,
/// and its last layer hands `(x, y + Φ_i(x), x)` to the next one.
pub fn sum_finite_width<T: Scalar>(nets: &[ReluNetwork<T>]) -> Result<ReluNetwork<T>> {
    let first = nets.first().ok_or(NetError::Empty)?;
    let (d, dp) = (first.in_dim(), first.out_dim());
    if nets.iter().any(|n| n.in_dim() != d || n.out_dim() != dp) {
        return Err(NetError::Dimension("summands need equal input and output dimensions".into()));
    }
    let wide = 2 * d + dp;
    let outw = d + 2 * dp;
    // x ↦ (x, 0, x)
    let in_map: AffineLayer<T> =
        selection_layer(d, &(0..d).map(Some).chain((0..dp).map(|_| None)).chain((0..d).map(Some)).collect::<Vec<_>>());
    // (x, y, w) ↦ (x, y + w, x)
    let mut mid = vec![T::zero(); wide * outw];
    for i in 0..d {
        mid[i * outw + i] = T::one();
        mid[(d + dp + i) * outw + i] = T::one();
    }
    for j in 0..dp {
        mid[(d + j) * outw + d + j] = T::one();
        mid[(d + j) * outw + d + dp + j] = T::one();
    }
    let mid_map = AffineLayer::new(wide, outw, mid, vec![T::zero(); wide])?;
    // (x, y, w) ↦ y + w
    let mut out = vec![T::zero(); dp * outw];
    for j in 0..dp {
        out[j * outw + d + j] = T::one();
        out[j * outw + d + dp + j] = T::one();
    }
    let out_map = AffineLayer::new(dp, outw, out, vec![T::zero(); dp])?;

    let n = nets.len();
    let mut acc: Option<ReluNetwork<T>> = None;
    for (i, phi) in nets.iter().enumerate() {
        let li = phi.depth();
        let psi = parallelize(&[identity_network(d, li), identity_network(dp, li), phi.clone()])?;
        let mut layers = psi.into_layers();
        if i == 0 {
            layers[0] = in_map.then(&layers[0])?;
        }
        let last = layers.len() - 1;
        layers[last] = layers[last].then(if i + 1 == n { &out_map } else { &mid_map })?;
        let psi = ReluNetwork::new(layers)?;
        acc = Some(match acc {
            None => psi,
            Some(prev) => compose(&psi, &prev)?,
        });
    }
    Ok(acc.expect("at least one summand"))
}

/// Removes hidden neurons that cannot influence the output.
///
/// A hidden neuron with no outgoing weight is dropped; one with no incoming
/// weight is constant, so its value `ρ(b)` is folded into the next bias and
/// it is dropped too. This repeats until nothing changes. When a hidden
/// layer empties the network is constant and collapses to a single layer
/// with zero matrix. Input and output neurons are never removed.
pub fn prune<T: Scalar>(net: &ReluNetwork<T>) -> ReluNetwork<T> {
    struct Dense<T> {
        rows: usize,
        cols: usize,
        m: Vec<T>,
        b: Vec<T>,
    }
    let mut ls: Vec<Dense<T>> = net
        .layers()
        .iter()
        .map(|l| Dense { rows: l.rows(), cols: l.cols(), m: l.matrix().to_vec(), b: l.bias().to_vec() })
        .collect();
    let depth = ls.len();
    let zero = T::zero();
    loop {
        let mut changed = false;
        for h in 0..depth.saturating_sub(1) {
            let (lo, hi) = ls.split_at_mut(h + 1);
            let cur = &mut lo[h];
            let next = &mut hi[0];
            let mut keep = Vec::with_capacity(cur.rows);
            for j in 0..cur.rows {
                let out_dead = (0..next.rows).all(|r| next.m[r * next.cols + j] == zero);
                let in_dead = (0..cur.cols).all(|c| cur.m[j * cur.cols + c] == zero);
                if out_dead {
                    continue;
                }
                if in_dead {
                    let v = cur.b[j].relu();
                    if v != zero {
                        for r in 0..next.rows {
                            let w = next.m[r * next.cols + j];
                            if w != zero {
                                next.b[r] = next.b[r] + w * v;
                            }
                        }
                    }
                    continue;
                }
                keep.push(j);
            }
            if keep.len() == cur.rows {
                continue;
            }
            changed = true;
            let m: Vec<T> = keep.iter().flat_map(|&j| cur.m[j * cur.cols..(j + 1) * cur.cols].to_vec()).collect();
            cur.b = keep.iter().map(|&j| cur.b[j]).collect();
            cur.m = m;
            cur.rows = keep.len();
            let mut nm = Vec::with_capacity(next.rows * keep.len());
            for r in 0..next.rows {
                for &j in &keep {
                    nm.push(next.m[r * next.cols + j]);
                }
            }
            next.m = nm;
            next.cols = keep.len();
            if keep.is_empty() {
                break;
            }
        }
        if let Some(h) = ls.iter().take(depth - 1).position(|l| l.rows == 0) {
            // Everything after layer h sees a constant input.
            let mut v: Vec<T> = ls[h + 1].b.clone();
            for l in &ls[h + 2..] {
                let x: Vec<T> = v.iter().map(|t| t.relu()).collect();
                v = (0..l.rows)
                    .map(|r| {
                        let mut acc = zero;
                        for c in 0..l.cols {
                            let w = l.m[r * l.cols + c];
                            if w != zero {
                                acc = acc + w * x[c];
                            }
                        }
                        acc + l.b[r]
                    })
                    .collect();
            }
            let layer = AffineLayer::new(net.out_dim(), net.in_dim(), vec![zero; net.out_dim() * net.in_dim()], v)
                .expect("constant layer shape");
            return ReluNetwork::from_layer(layer);
        }
        if !changed {
            break;
        }
    }
    let layers = ls
        .into_iter()
        .map(|l| AffineLayer::new(l.rows, l.cols, l.m, l.b).expect("pruned shape"))
        .collect();
    ReluNetwork::new(layers).expect("pruned chain")
}

#[cfg(test)]
mod tests {
    use super::*;

    type N = ReluNetwork<f64>;

    fn hat() -> N {
        ReluNetwork::new(vec![
            AffineLayer::from_f64_rows(&[&[1.0], &[1.0], &[1.0]], &[0.0, -0.5, -1.0]).unwrap(),
            AffineLayer::from_f64_rows(&[&[2.0, -4.0, 2.0]], &[0.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn scalar_mult_depth_and_exactness() {
        for &a in &[1.5, 2.0, 3.0, 8.0, 100.0, -7.25, 1e6] {
            let n = scalar_mult_network::<f64>(a, 1);
            let m = n.metrics();
            assert_eq!(m.depth as i32, (a as f64).abs().floor_log2() + 4);
            assert!(m.weight_magnitude <= 1.0);
            assert!(m.width <= 3);
            for &x in &[-2.0, -0.3, 0.0, 0.7, 1.2, 5.0] {
                let y = n.eval1(x);
                assert!((y - a * x).abs() <= 1e-15 * (a * x).abs().max(1.0), "a={a} x={x} y={y}");
            }
        }
    }

    #[test]
    fn power_of_two_scaling_is_exact() {
        let n = power_of_two_mult_network::<f64>(5, 1);
        for &x in &[-3.3, 0.1, 7.77] {
            assert_eq!(n.eval1(x), 32.0 * x);
        }
    }

    #[test]
    fn extend_depth_is_bitwise_faithful() {
        let g = hat();
        let e = extend_depth(&g, 6).unwrap();
        for i in 0..=200 {
            let x = -0.5 + 2.0 * i as f64 / 200.0;
            assert_eq!(e.eval1(x).to_bits(), g.eval1(x).to_bits());
        }
        assert!(extend_depth(&g, 2).is_err());
    }

    #[test]
    fn reduce_weights_exponent_guard() {
        let big = ReluNetwork::new(vec![AffineLayer::<f64>::scaled_identity(1, 1e300); 4]).unwrap();
        assert!(reduce_weights(&big).is_err());
    }

    #[test]
    fn prune_collapses_constant_network() {
        let n: N = ReluNetwork::new(vec![
            AffineLayer::from_f64_rows(&[&[0.0], &[0.0]], &[2.0, -1.0]).unwrap(),
            AffineLayer::from_f64_rows(&[&[3.0, 5.0]], &[1.0]).unwrap(),
            AffineLayer::from_f64_rows(&[&[-1.0]], &[0.5]).unwrap(),
        ])
        .unwrap();
        let p = prune(&n);
        assert_eq!(p.depth(), 1);
        assert_eq!(p.eval1(123.0), n.eval1(123.0));
        assert_eq!(p.eval1(0.0), -6.5);
    }

    #[test]
    fn selection_layer_picks() {
        let s: AffineLayer<f64> = selection_layer(2, &[Some(1), None, Some(0)]);
        assert_eq!(s.apply(&[3.0, 4.0]), vec![4.0, 0.0, 3.0]);
    }
}

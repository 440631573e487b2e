use num_bigint::{BigInt, Sign};
use num_traits::One;
use relu_core::{Layer, Network};

use crate::{BitString, QuantError, QuantGrid, Result};

fn bit_len(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// `⌈log2 n⌉` for `n ≥ 1`.
fn ceil_log2(n: u64) -> u64 {
    bit_len(n - 1) as u64
}

/// `B = 2(m⌈log2(1/ε)⌉ + 1)`, the width of one weight field.
pub fn weight_bits(grid: &QuantGrid) -> u64 {
    2 * (grid.shift() + 1)
}

/// `3MB + 3M⌈log2(2M)⌉ + (M+2)⌈log2 M⌉ + M + 1`, and 1 for `M = 0`.
pub fn code_length_bound(m_conn: u64, grid: &QuantGrid) -> u64 {
    if m_conn == 0 {
        return 1;
    }
    let b = weight_bits(grid);
    3 * m_conn * b + 3 * m_conn * ceil_log2(2 * m_conn) + (m_conn + 2) * ceil_log2(m_conn) + m_conn + 1
}

fn header_width(m_conn: u64) -> u32 {
    (ceil_log2(m_conn) as u32).max(1)
}

fn node_width(n: u64) -> u32 {
    bit_len(n)
}

struct Weights<'a> {
    grid: &'a QuantGrid,
    width: u64,
    offset: BigInt,
}

impl<'a> Weights<'a> {
    fn new(grid: &'a QuantGrid) -> Self {
        let width = weight_bits(grid);
        Self { grid, width, offset: BigInt::one() << (width - 1) as usize }
    }

    fn put(&self, out: &mut BitString, w: f64, layer: usize) -> Result<()> {
        let q = self.grid.index_of(w);
        if self.grid.value_of(&q) != Some(w) || !self.grid.within_bound(w) {
            return Err(QuantError::OffGrid { layer, value: w });
        }
        let u = q + &self.offset;
        match u.to_biguint().filter(|u| u.bits() <= self.width) {
            Some(u) => {
                out.push_big(&u, self.width);
                Ok(())
            }
            None => Err(QuantError::Overflow { layer, value: w, bits: self.width }),
        }
    }

    fn get(&self, r: &mut crate::BitReader<'_>) -> Result<f64> {
        let u = BigInt::from_biguint(Sign::Plus, r.read_big(self.width)?);
        let q = u - &self.offset;
        let v = self.grid.value_of(&q).ok_or_else(|| QuantError::Malformed("weight index is not a double".into()))?;
        if !self.grid.within_bound(v) {
            return Err(QuantError::Malformed(format!("weight {v} exceeds the grid bound")));
        }
        Ok(v)
    }
}

/// Encodes a non-degenerate network whose weights all lie on `grid`.
///
/// Non-degenerate means every input and hidden node has an outgoing edge
/// and every output node an incoming one; run `prune` first.
pub fn encode(net: &Network, grid: &QuantGrid) -> Result<BitString> {
    let mut out = BitString::new();
    let m_conn = net.metrics().connectivity as u64;
    if m_conn == 0 {
        out.push(false);
        return Ok(out);
    }
    let dims = net.dims();
    let depth = net.depth();
    for (l, layer) in net.layers().iter().enumerate() {
        for j in 0..layer.cols() {
            if (0..layer.rows()).all(|r| layer.get(r, j) == 0.0) {
                return Err(QuantError::Degenerate { layer: l, node: j, why: "no outgoing edge" });
            }
        }
    }
    let last = net.last();
    for r in 0..last.rows() {
        if last.row(r).iter().all(|&w| w == 0.0) {
            return Err(QuantError::Degenerate { layer: depth, node: r, why: "no incoming edge" });
        }
    }
    for _ in 0..m_conn {
        out.push(true);
    }
    out.push(false);
    let wm = header_width(m_conn);
    let field = |v: usize| -> Result<u64> {
        let v = v as u64 - 1;
        if bit_len(v) > wm {
            return Err(QuantError::Malformed(format!("header value {} exceeds {wm} bits", v + 1)));
        }
        Ok(v)
    };
    out.push_uint(field(depth)?, wm);
    for &n in &dims {
        out.push_uint(field(n)?, wm);
    }
    let n_total: usize = dims.iter().sum();
    let wn = node_width(n_total as u64);
    let mut first = vec![1usize; dims.len()];
    for l in 1..dims.len() {
        first[l] = first[l - 1] + dims[l - 1];
    }
    for (l, layer) in net.layers().iter().enumerate() {
        for j in 0..layer.cols() {
            for (r, _) in (0..layer.rows()).map(|r| (r, layer.get(r, j))).filter(|(_, w)| *w != 0.0) {
                out.push_uint((first[l + 1] + r) as u64, wn);
            }
            out.push_uint(0, wn);
        }
    }
    let weights = Weights::new(grid);
    for (l, layer) in net.layers().iter().enumerate() {
        for j in 0..layer.cols() {
            let bias = if l == 0 { 0.0 } else { net.layers()[l - 1].bias()[j] };
            weights.put(&mut out, bias, l)?;
            for r in 0..layer.rows() {
                let w = layer.get(r, j);
                if w != 0.0 {
                    weights.put(&mut out, w, l + 1)?;
                }
            }
        }
    }
    for &b in last.bias() {
        weights.put(&mut out, b, depth)?;
    }
    Ok(out)
}

/// Inverse of [`encode`]; `None` is the `M = 0` network.
pub fn decode(bits: &BitString, grid: &QuantGrid) -> Result<Option<Network>> {
    let mut r = bits.reader();
    let mut m_conn = 0u64;
    while r.read_bit()? {
        m_conn += 1;
    }
    if m_conn == 0 {
        if r.remaining() != 0 {
            return Err(QuantError::Malformed("bits after the empty-network marker".into()));
        }
        return Ok(None);
    }
    let wm = header_width(m_conn);
    let depth = r.read_uint(wm)? as usize + 1;
    if depth as u64 > m_conn {
        return Err(QuantError::Malformed(format!("depth {depth} exceeds connectivity {m_conn}")));
    }
    let dims: Vec<usize> = (0..=depth).map(|_| r.read_uint(wm).map(|v| v as usize + 1)).collect::<Result<_>>()?;
    let n_total: usize = dims.iter().sum();
    if n_total as u64 > 2 * m_conn + 1 {
        return Err(QuantError::Malformed(format!("{n_total} nodes cannot have only {m_conn} nonzero weights")));
    }
    let wn = node_width(n_total as u64);
    let mut first = vec![1usize; dims.len()];
    for l in 1..dims.len() {
        first[l] = first[l - 1] + dims[l - 1];
    }
    // children[l][j]: rows of layer l+1 fed by node j of layer l
    let mut children: Vec<Vec<Vec<usize>>> = Vec::with_capacity(depth);
    let mut edges = 0u64;
    for l in 0..depth {
        let mut layer_children = Vec::with_capacity(dims[l]);
        for _ in 0..dims[l] {
            let mut list: Vec<usize> = Vec::new();
            loop {
                let idx = r.read_uint(wn)? as usize;
                if idx == 0 {
                    break;
                }
                let lo = first[l + 1];
                if idx < lo || idx >= lo + dims[l + 1] {
                    return Err(QuantError::Malformed(format!("child index {idx} is not in layer {}", l + 1)));
                }
                let c = idx - lo;
                if list.last().is_some_and(|&p| p >= c) {
                    return Err(QuantError::Malformed("child indices not strictly ascending".into()));
                }
                list.push(c);
                edges += 1;
                if edges > m_conn {
                    return Err(QuantError::Malformed("more edges than nonzero weights".into()));
                }
            }
            layer_children.push(list);
        }
        children.push(layer_children);
    }
    let weights = Weights::new(grid);
    let mut mats: Vec<Vec<f64>> = (0..depth).map(|l| vec![0.0; dims[l + 1] * dims[l]]).collect();
    let mut biases: Vec<Vec<f64>> = (0..depth).map(|l| vec![0.0; dims[l + 1]]).collect();
    for l in 0..depth {
        for j in 0..dims[l] {
            let node = weights.get(&mut r)?;
            if l == 0 {
                if node != 0.0 {
                    return Err(QuantError::Malformed("input node carries a nonzero weight".into()));
                }
            } else {
                biases[l - 1][j] = node;
            }
            for &c in &children[l][j] {
                let w = weights.get(&mut r)?;
                if w == 0.0 {
                    return Err(QuantError::Malformed("listed edge has weight 0".into()));
                }
                mats[l][c * dims[l] + j] = w;
            }
        }
    }
    for j in 0..dims[depth] {
        biases[depth - 1][j] = weights.get(&mut r)?;
    }
    if r.remaining() != 0 {
        return Err(QuantError::Malformed(format!("{} trailing bits", r.remaining())));
    }
    let layers = mats
        .into_iter()
        .zip(biases)
        .enumerate()
        .map(|(l, (m, b))| Layer::new(dims[l + 1], dims[l], m, b))
        .collect::<relu_core::Result<Vec<_>>>()?;
    let net = Network::new(layers)?;
    if net.metrics().connectivity as u64 != m_conn {
        return Err(QuantError::Malformed(format!(
            "header announces {m_conn} nonzero weights, body holds {}",
            net.metrics().connectivity
        )));
    }
    Ok(Some(net))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hat() -> Network {
        Network::new(vec![
            Layer::from_f64_rows(&[&[1.0], &[1.0], &[1.0]], &[0.0, -0.5, -1.0]).unwrap(),
            Layer::from_f64_rows(&[&[2.0, -4.0, 2.0]], &[0.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn bound_examples() {
        let g = QuantGrid::new(1, 0.25).unwrap();
        assert_eq!(weight_bits(&g), 6);
        assert_eq!(code_length_bound(1, &g), 23);
        assert_eq!(code_length_bound(0, &g), 1);
    }

    #[test]
    fn hat_round_trip() {
        let g = QuantGrid::new(2, 0.25).unwrap();
        let bits = encode(&hat(), &g).unwrap();
        assert!(bits.to_string().starts_with("111111110"));
        assert!(bits.len() as u64 <= code_length_bound(8, &g));
        let back = decode(&bits, &g).unwrap().unwrap();
        assert!(back.bitwise_eq(&hat()));
    }

    #[test]
    fn empty_network() {
        let g = QuantGrid::new(2, 0.25).unwrap();
        let zero = Network::from_layer(Layer::zeros(1, 1));
        assert_eq!(encode(&zero, &g).unwrap().to_string(), "0");
        assert_eq!(decode(&"0".parse().unwrap(), &g).unwrap(), None);
    }
}

//! The `relunet v1` text format.
//!
//! ```text
//! relunet v1
//! L
//! N_0 N_1 ... N_L
//! <layer 1: A_1 row-major, then b_1>
//! ...
//! ```
//!
//! Every weight is a hexadecimal float literal, so a write/parse round trip
//! restores each bit (signed zeros included). Layers are written one matrix
//! row per line followed by a bias line, but the parser only cares about
//! whitespace-separated tokens after the header.

use std::fmt::Write as _;

use hexfloat2::HexFloat;

use crate::{AffineLayer, NetError, Network, Result};

pub const MAGIC: &str = "relunet v1";

pub fn to_string(net: &Network) -> String {
    let mut s = String::new();
    let dims: Vec<String> = net.dims().iter().map(usize::to_string).collect();
    writeln!(s, "{MAGIC}\n{}\n{}", net.depth(), dims.join(" ")).unwrap();
    for layer in net.layers() {
        for r in 0..layer.rows() {
            let row: Vec<String> = layer.row(r).iter().map(|&v| HexFloat::from(v).to_string()).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        let bias: Vec<String> = layer.bias().iter().map(|&v| HexFloat::from(v).to_string()).collect();
        writeln!(s, "{}", bias.join(" ")).unwrap();
    }
    s
}

fn perr(line: usize, msg: impl Into<String>) -> NetError {
    NetError::Parse { line, msg: msg.into() }
}

pub fn from_str(text: &str) -> Result<Network> {
    let mut lines = text.lines().enumerate();
    let mut header = || -> Result<(usize, &str)> {
        lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l.trim()))
            .ok_or_else(|| perr(0, "truncated header"))
    };
    let (ln, magic) = header()?;
    if magic != MAGIC {
        return Err(perr(ln, format!("expected `{MAGIC}`, found `{magic}`")));
    }
    let (ln, depth) = header()?;
    let depth: usize = depth.parse().map_err(|_| perr(ln, "depth is not an integer"))?;
    if depth == 0 {
        return Err(perr(ln, "depth must be positive"));
    }
    let (ln, dims) = header()?;
    let dims: Vec<usize> = dims
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| perr(ln, format!("bad dimension `{t}`"))))
        .collect::<Result<_>>()?;
    if dims.len() != depth + 1 || dims.contains(&0) {
        return Err(perr(ln, format!("expected {} positive dimensions", depth + 1)));
    }
    let mut tokens = lines.flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
    let mut read = |n: usize| -> Result<Vec<f64>> {
        (0..n)
            .map(|_| {
                let (ln, t) = tokens.next().ok_or_else(|| perr(0, "unexpected end of weights"))?;
                hexfloat2::parse::<f64>(t).map_err(|_| perr(ln, format!("bad hex float `{t}`")))
            })
            .collect()
    };
    let mut layers = Vec::with_capacity(depth);
    for l in 0..depth {
        let (rows, cols) = (dims[l + 1], dims[l]);
        let m = read(rows * cols)?;
        let b = read(rows)?;
        layers.push(AffineLayer::new(rows, cols, m, b).map_err(|e| match e {
            NetError::NonFinite { .. } => NetError::NonFinite { layer: l + 1 },
            e => e,
        })?);
    }
    if let Some((ln, t)) = tokens.next() {
        return Err(perr(ln, format!("trailing token `{t}`")));
    }
    Network::new(layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_keeps_bits() {
        let l1 = AffineLayer::new(2, 1, vec![-0.0, 0.1], vec![f64::MIN_POSITIVE / 8.0, -1e300]).unwrap();
        let l2 = AffineLayer::new(1, 2, vec![1.0 / 3.0, f64::MAX], vec![-2.5]).unwrap();
        let net = Network::new(vec![l1, l2]).unwrap();
        let text = to_string(&net);
        assert!(text.starts_with("relunet v1\n2\n1 2 1\n"));
        let back = from_str(&text).unwrap();
        assert!(back.bitwise_eq(&net));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(from_str("relunet v2\n1\n1 1\n0x1p0 0x0p0\n"), Err(NetError::Parse { line: 1, .. })));
        assert!(from_str("relunet v1\n1\n1 1\n0x1p0\n").is_err());
        assert!(from_str("relunet v1\n1\n1 1\n0x1p0 0x0p0 0x0p0\n").is_err());
        assert!(from_str("relunet v1\n1\n1 1\nzz 0x0p0\n").is_err());
        assert!(from_str("relunet v1\n0\n1\n").is_err());
    }
}

use crate::{AffineLayer, NetError, NetworkMetrics, Result, Scalar};

const BLOCK: usize = 128;

/// Nonempty chain of affine layers with ReLU between consecutive layers.
#[derive(Clone, Debug)]
pub struct ReluNetwork<T> {
    layers: Vec<AffineLayer<T>>,
}

impl<T: Scalar> PartialEq for ReluNetwork<T> {
    fn eq(&self, other: &Self) -> bool {
        self.layers == other.layers
    }
}

impl<T: Scalar> ReluNetwork<T> {
    pub fn new(layers: Vec<AffineLayer<T>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(NetError::Empty);
        }
        for (i, w) in layers.windows(2).enumerate() {
            if w[0].rows() != w[1].cols() {
                return Err(NetError::Dimension(format!(
                    "layer {} outputs {} values but layer {} takes {}",
                    i + 1,
                    w[0].rows(),
                    i + 2,
                    w[1].cols()
                )));
            }
        }
        Ok(Self { layers })
    }

    pub fn from_layer(layer: AffineLayer<T>) -> Self {
        Self { layers: vec![layer] }
    }

    pub fn layers(&self) -> &[AffineLayer<T>] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<AffineLayer<T>> {
        self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn in_dim(&self) -> usize {
        self.layers[0].cols()
    }

    pub fn out_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].rows()
    }

    pub fn first(&self) -> &AffineLayer<T> {
        &self.layers[0]
    }

    pub fn last(&self) -> &AffineLayer<T> {
        &self.layers[self.layers.len() - 1]
    }

    /// `N_0, N_1, ..., N_L`.
    pub fn dims(&self) -> Vec<usize> {
        std::iter::once(self.in_dim()).chain(self.layers.iter().map(|l| l.rows())).collect()
    }

    pub fn metrics(&self) -> NetworkMetrics<T> {
        NetworkMetrics {
            connectivity: self.layers.iter().map(|l| l.nonzeros()).sum(),
            depth: self.depth(),
            width: self.dims().into_iter().max().unwrap_or(0),
            weight_magnitude: self.layers.iter().fold(T::zero(), |m, l| m.max(l.max_abs())),
        }
    }

    pub fn evaluate(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.in_dim() {
            return Err(NetError::InputShape { expected: self.in_dim(), got: x.len() });
        }
        let last = self.layers.len() - 1;
        let mut v = x.to_vec();
        for (i, layer) in self.layers.iter().enumerate() {
            v = layer.apply(&v);
            if i != last {
                v.iter_mut().for_each(|t| *t = t.relu());
            }
        }
        Ok(v)
    }

    /// Value of a network with one input and one output.
    ///
    /// # Panics
    /// If the network is not scalar-valued in one variable.
    pub fn eval1(&self, x: T) -> T {
        assert!(self.in_dim() == 1 && self.out_dim() == 1, "eval1 needs a 1-in 1-out network");
        self.evaluate(&[x]).expect("shape checked")[0]
    }

    /// Evaluates many points at once; `xs` holds the points back to back and
    /// the result holds the outputs back to back.
    ///
    /// Rounds exactly like [`evaluate`](Self::evaluate), point for point.
    pub fn evaluate_batch(&self, xs: &[T]) -> Result<Vec<T>> {
        let d = self.in_dim();
        if xs.len() % d != 0 {
            return Err(NetError::InputShape { expected: d, got: xs.len() % d });
        }
        let n = xs.len() / d;
        let dout = self.out_dim();
        let width = self.dims().into_iter().max().unwrap_or(1);
        let mut out = vec![T::zero(); n * dout];
        let mut cur = vec![T::zero(); width * BLOCK];
        let mut nxt = vec![T::zero(); width * BLOCK];
        let last = self.layers.len() - 1;
        let mut start = 0;
        while start < n {
            let b = BLOCK.min(n - start);
            for p in 0..b {
                for i in 0..d {
                    cur[i * BLOCK + p] = xs[(start + p) * d + i];
                }
            }
            for (li, layer) in self.layers.iter().enumerate() {
                let (row_ptr, col_idx, vals) = layer.csr();
                let bias = layer.bias();
                for r in 0..layer.rows() {
                    let o = &mut nxt[r * BLOCK..r * BLOCK + b];
                    o.fill(T::zero());
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        let c = col_idx[k];
                        let w = vals[k];
                        let src = &cur[c * BLOCK..c * BLOCK + b];
                        for (op, &s) in o.iter_mut().zip(src) {
                            *op = *op + w * s;
                        }
                    }
                    let br = bias[r];
                    if li == last {
                        o.iter_mut().for_each(|t| *t = *t + br);
                    } else {
                        o.iter_mut().for_each(|t| *t = (*t + br).relu());
                    }
                }
                std::mem::swap(&mut cur, &mut nxt);
            }
            for p in 0..b {
                for j in 0..dout {
                    out[(start + p) * dout + j] = cur[j * BLOCK + p];
                }
            }
            start += b;
        }
        Ok(out)
    }

    /// Batch evaluation of a 1-in 1-out network on a list of abscissae.
    pub fn eval1_many(&self, xs: &[T]) -> Vec<T> {
        assert!(self.in_dim() == 1 && self.out_dim() == 1, "eval1_many needs a 1-in 1-out network");
        self.evaluate_batch(xs).expect("shape checked")
    }

    /// Structural equality down to the bit pattern of every weight.
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.layers.len() == other.layers.len()
            && self.layers.iter().zip(&other.layers).all(|(a, b)| a.bitwise_eq(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hat() -> ReluNetwork<f64> {
        ReluNetwork::new(vec![
            AffineLayer::from_f64_rows(&[&[1.0], &[1.0], &[1.0]], &[0.0, -0.5, -1.0]).unwrap(),
            AffineLayer::from_f64_rows(&[&[2.0, -4.0, 2.0]], &[0.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_mismatched_chain() {
        let a = AffineLayer::<f64>::identity(2);
        let b = AffineLayer::<f64>::identity(3);
        assert!(ReluNetwork::new(vec![a, b]).is_err());
        assert_eq!(ReluNetwork::<f64>::new(vec![]), Err(NetError::Empty));
    }

    #[test]
    fn wrong_input_length_is_an_error() {
        let err = hat().evaluate(&[1.0, 2.0]).unwrap_err();
        assert_eq!(err, NetError::InputShape { expected: 1, got: 2 });
    }

    #[test]
    fn batch_matches_pointwise_bitwise() {
        let g = hat();
        let xs: Vec<f64> = (0..1000).map(|i| -0.3 + 1.7 * i as f64 / 999.0).collect();
        let batch = g.eval1_many(&xs);
        for (x, y) in xs.iter().zip(&batch) {
            assert_eq!(g.eval1(*x).to_bits(), y.to_bits());
        }
    }

    #[test]
    fn f32_evaluation() {
        let g: ReluNetwork<f32> = ReluNetwork::new(vec![
            AffineLayer::from_f64_rows(&[&[1.0], &[1.0], &[1.0]], &[0.0, -0.5, -1.0]).unwrap(),
            AffineLayer::from_f64_rows(&[&[2.0, -4.0, 2.0]], &[0.0]).unwrap(),
        ])
        .unwrap();
        assert_eq!(g.eval1(0.25f32), 0.5f32);
        assert_eq!(g.metrics().weight_magnitude, 4.0f32);
    }
}

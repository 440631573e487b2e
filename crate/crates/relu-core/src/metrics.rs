/// Size of a network: `M` nonzero weights, `L` layers, `W` widest layer
/// (input and output included) and `B` the largest absolute weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkMetrics<T> {
    pub connectivity: usize,
    pub depth: usize,
    pub width: usize,
    pub weight_magnitude: T,
}

impl<T> NetworkMetrics<T> {
    /// `M ≤ L·W·(W+1)`, which holds for every well-formed network.
    pub fn connectivity_within_dense_bound(&self) -> bool {
        self.connectivity <= self.depth * self.width * (self.width + 1)
    }
}

use crate::{NetError, Result, Scalar};

/// Affine map `x ↦ A x + b` with `A` stored row-major.
///
/// The nonzero pattern of `A` is cached in compressed-row form; evaluation
/// walks it left to right so the scalar and batched paths round identically.
#[derive(Clone, Debug)]
pub struct AffineLayer<T> {
    rows: usize,
    cols: usize,
    matrix: Vec<T>,
    bias: Vec<T>,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Scalar> PartialEq for AffineLayer<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.matrix == other.matrix
            && self.bias == other.bias
    }
}

impl<T: Scalar> AffineLayer<T> {
    pub fn new(rows: usize, cols: usize, matrix: Vec<T>, bias: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(NetError::Dimension(format!("layer of shape {rows}x{cols}")));
        }
        if matrix.len() != rows * cols {
            return Err(NetError::Dimension(format!(
                "matrix has {} entries, expected {rows}x{cols}",
                matrix.len()
            )));
        }
        if bias.len() != rows {
            return Err(NetError::Dimension(format!(
                "bias has {} entries, expected {rows}",
                bias.len()
            )));
        }
        if matrix.iter().chain(bias.iter()).any(|v| !v.is_finite()) {
            return Err(NetError::NonFinite { layer: 0 });
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in 0..rows {
            for c in 0..cols {
                let v = matrix[r * cols + c];
                if v != T::zero() {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { rows, cols, matrix, bias, row_ptr, col_idx, vals })
    }

    /// Builds a layer from matrix rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<T>], bias: Vec<T>) -> Result<Self> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(NetError::Dimension("ragged matrix rows".into()));
        }
        let matrix = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), cols, matrix, bias)
    }

    /// Same as [`from_rows`](Self::from_rows) for `f64` literals.
    pub fn from_f64_rows(rows: &[&[f64]], bias: &[f64]) -> Result<Self> {
        let rows: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&v| T::lit(v)).collect()).collect();
        Self::from_rows(&rows, bias.iter().map(|&v| T::lit(v)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, T::one())
    }

    pub fn scaled_identity(n: usize, a: T) -> Self {
        let mut m = vec![T::zero(); n * n];
        for i in 0..n {
            m[i * n + i] = a;
        }
        Self::new(n, n, m, vec![T::zero(); n]).expect("identity shape")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![T::zero(); rows * cols], vec![T::zero(); rows]).expect("zero shape")
    }

    /// Output dimension.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Input dimension.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[T] {
        &self.matrix
    }

    pub fn bias(&self) -> &[T] {
        &self.bias
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.matrix[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.matrix[r * self.cols..(r + 1) * self.cols]
    }

    pub fn into_parts(self) -> (usize, usize, Vec<T>, Vec<T>) {
        (self.rows, self.cols, self.matrix, self.bias)
    }

    /// Number of nonzero entries of `A` and `b` together.
    pub fn nonzeros(&self) -> usize {
        self.vals.len() + self.bias.iter().filter(|b| **b != T::zero()).count()
    }

    pub fn max_abs(&self) -> T {
        self.matrix
            .iter()
            .chain(self.bias.iter())
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Nonzero `(column, value)` pairs of row `r`, in column order.
    pub fn sparse_row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    /// `A x + b` without activation.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (c, v) in self.sparse_row(r) {
                    acc = acc + v * x[c];
                }
                acc + self.bias[r]
            })
            .collect()
    }

    pub(crate) fn csr(&self) -> (&[usize], &[usize], &[T]) {
        (&self.row_ptr, &self.col_idx, &self.vals)
    }

    /// Entrywise scaling of `A` by `sa` and `b` by `sb`.
    pub fn scaled(&self, sa: T, sb: T) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.matrix.iter().map(|&v| v * sa).collect(),
            self.bias.iter().map(|&v| v * sb).collect(),
        )
        .expect("scaling keeps shape")
    }

    /// Stacks `[self; other]` (same input dimension).
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(NetError::Dimension(format!("vstack {} vs {} columns", self.cols, other.cols)));
        }
        let mut m = self.matrix.clone();
        m.extend_from_slice(&other.matrix);
        let mut b = self.bias.clone();
        b.extend_from_slice(&other.bias);
        Self::new(self.rows + other.rows, self.cols, m, b)
    }

    /// The affine map `x ↦ M (A x + b) + c` where `outer = (M, c)`.
    ///
    /// Used to merge linear glue into a neighbouring layer.
    pub fn then(&self, outer: &Self) -> Result<Self> {
        if outer.cols != self.rows {
            return Err(NetError::Dimension(format!(
                "cannot follow a {}-output layer by a {}-input map",
                self.rows, outer.cols
            )));
        }
        let (n, p) = (outer.rows, self.cols);
        let mut m = vec![T::zero(); n * p];
        let mut b = vec![T::zero(); n];
        for i in 0..n {
            for (j, mij) in outer.sparse_row(i) {
                for c in 0..p {
                    let a = self.matrix[j * p + c];
                    if a != T::zero() {
                        m[i * p + c] = m[i * p + c] + mij * a;
                    }
                }
            }
            let mut acc = T::zero();
            for (j, mij) in outer.sparse_row(i) {
                acc = acc + mij * self.bias[j];
            }
            b[i] = acc + outer.bias[i];
        }
        Self::new(n, p, m, b)
    }

    /// Block-diagonal sum of layers, biases concatenated.
    pub fn block_diag(blocks: &[&Self]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(NetError::Empty);
        }
        let rows: usize = blocks.iter().map(|l| l.rows).sum();
        let cols: usize = blocks.iter().map(|l| l.cols).sum();
        let mut m = vec![T::zero(); rows * cols];
        let mut b = Vec::with_capacity(rows);
        let (mut r0, mut c0) = (0, 0);
        for l in blocks {
            for r in 0..l.rows {
                for c in 0..l.cols {
                    m[(r0 + r) * cols + c0 + c] = l.matrix[r * l.cols + c];
                }
            }
            b.extend_from_slice(&l.bias);
            r0 += l.rows;
            c0 += l.cols;
        }
        Self::new(rows, cols, m, b)
    }

    /// Bit-level equality (distinguishes `0.0` from `-0.0`).
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        fn same<T: Scalar>(a: &[T], b: &[T]) -> bool {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.integer_decode() == y.integer_decode())
        }
        self.rows == other.rows
            && self.cols == other.cols
            && same(&self.matrix, &other.matrix)
            && same(&self.bias, &other.bias)
    }
}

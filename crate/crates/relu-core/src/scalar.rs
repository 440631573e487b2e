use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

/// Real scalar a network can be stored and evaluated in.
pub trait Scalar: Float + FromPrimitive + Debug + Default + Send + Sync + 'static {
    /// Converts an `f64` literal, rounding to nearest.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn relu(self) -> Self {
        if self > Self::zero() {
            self
        } else {
            Self::zero()
        }
    }

    /// `⌊log2 |x|⌋` for finite nonzero `x`, computed from the binary
    /// representation so that exact powers of two are never off by one.
    fn floor_log2(self) -> i32 {
        let (mant, exp, _) = self.abs().integer_decode();
        debug_assert!(mant != 0);
        exp as i32 + (63 - mant.leading_zeros() as i32)
    }

    /// `2^k`, exact whenever it is representable.
    fn pow2(k: i32) -> Self {
        Self::lit(2.0).powi(k)
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Default + Send + Sync + 'static {}

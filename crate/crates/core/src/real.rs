//! Scalar abstraction: the engine is generic over the floating-point type.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the engine computes with (`f32` or `f64`).
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Display
    + LowerExp
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant. Panics only if the target type cannot
    /// represent finite doubles at all, which no `Real` impl hits.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant must convert")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Display
        + LowerExp
        + Debug
        + Send
        + Sync
        + 'static
{
}

/// Uniformly spaced nodes from `lo` to `hi` inclusive.
///
/// When the range is symmetric about zero the upper half is built by
/// mirroring the lower half, so `nodes[i] == -nodes[n-1-i]` holds bitwise.
/// Several decompositions rely on that exact pairing.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    assert!(n >= 2, "linspace needs at least two nodes");
    assert!(lo < hi, "linspace needs lo < hi");
    let len = T::from_usize(n - 1).unwrap();
    let step = (hi - lo) / len;
    let mut nodes = vec![T::zero(); n];
    if lo == -hi {
        for i in 0..n / 2 {
            let t = lo + step * T::from_usize(i).unwrap();
            nodes[i] = t;
            nodes[n - 1 - i] = -t;
        }
        // middle node of an odd-length symmetric grid is exactly zero
    } else {
        for (i, node) in nodes.iter_mut().enumerate() {
            *node = lo + step * T::from_usize(i).unwrap();
        }
        nodes[n - 1] = hi;
    }
    nodes
}

//! Scalar field abstraction shared by every tensor type.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Element type of [`Tensor2`](crate::Tensor2) and [`Tensor4`](crate::Tensor4).
///
/// Blanket-implemented for every ordered signed field with primitive
/// conversions: `f32`, `f64` and `num_rational::Ratio<i64>` all qualify.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot
    /// represent the value at all (e.g. NaN into a rational).
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(|| panic!("scalar literal {x} not representable"))
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| panic!("count {n} not representable"))
    }

    /// Nearest `f64`; used for reporting only.
    fn approx_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
}

use std::fmt::Debug;

use num_traits::{FromPrimitive, Signed};

/// Coefficient field for polynomial arithmetic and the coefficient solver.
///
/// Anything signed, ordered and constructible from machine integers works:
/// `f32`, `f64`, `Ratio<i64>` and `BigRational`. Only the exact types give
/// exact answers; the float instantiations exist for quick approximations.
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Signed + FromPrimitive + Send + Sync
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("scalar must represent small integers")
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + PartialEq + PartialOrd + Signed + FromPrimitive + Send + Sync
{
}

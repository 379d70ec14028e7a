//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Smallest tolerance this type can honour meaningfully.
    const TOL_FLOOR: f64;

    /// Lossy conversion from `f64` literals.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Converts a tolerance stated for `f64` into one usable at this precision.
    #[inline]
    fn tol(base: f64) -> Self {
        Self::lit(base.max(Self::TOL_FLOOR))
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }
}

impl Real for f32 {
    const TOL_FLOOR: f64 = 1e-5;
}

impl Real for f64 {
    const TOL_FLOOR: f64 = 0.0;
}

/// `-p log2 p` with the `0 log 0 = 0` convention.
#[inline]
pub(crate) fn xlog2x<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -p * p.log2()
    }
}

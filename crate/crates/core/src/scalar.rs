//! Scalar abstractions shared by the exact and floating-point code paths.
//!
//! The Walsh transform only needs ring operations plus division by a power of
//! two, so it runs unchanged over `f32`, `f64` and exact rationals. The qubit
//! propagator needs transcendental functions and is restricted to [`Real`].

use std::fmt::Debug;
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num};

mod sealed {
    pub trait Sealed {}
    impl Sealed for f32 {}
    impl Sealed for f64 {}
    impl Sealed for num_rational::Ratio<i64> {}
    impl Sealed for num_rational::Ratio<i128> {}
}

/// A field element usable by the Walsh transform and exact integrals.
pub trait Scalar:
    Num + Clone + Neg<Output = Self> + PartialOrd + Debug + Send + Sync + 'static + sealed::Sealed
{
    fn from_i64(v: i64) -> Self;

    /// Lossy view used for reporting and tolerance checks.
    fn to_f64(&self) -> f64;
}

impl Scalar for f32 {
    #[inline]
    fn from_i64(v: i64) -> Self {
        v as f32
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
}

macro_rules! impl_ratio_scalar {
    ($($int:ty),*) => {$(
        impl Scalar for Ratio<$int> {
            #[inline]
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(v as $int)
            }
            #[inline]
            fn to_f64(&self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }
        }
    )*};
}
impl_ratio_scalar!(i64, i128);

/// Floating-point scalar: f32 or f64.
pub trait Real: Scalar + Float + FloatConst + FromPrimitive + Copy {
    /// Converts an `f64` literal or parameter into this precision.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar (`f32` or `f64`).
///
/// Tolerances throughout the crate are written for `f64`; [`Real::tol`]
/// rescales them by the ratio of machine epsilons so the same code path
/// stays meaningful in single precision.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + Default + Debug + Display + LowerExp + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// An `f64`-calibrated tolerance scaled to this type's precision.
    fn tol(v: f64) -> Self {
        let ratio = Self::epsilon().to_f64().unwrap_or(f64::EPSILON) / f64::EPSILON;
        Self::lit(v * ratio)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(v: T) -> C<T> {
    Complex::new(v, T::zero())
}

//! Real scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub use num_complex::Complex;

/// Floating point type usable as the real part of amplitudes: `f32` or `f64`.
pub trait Scalar:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance used by invariant checks (unitarity, norm, hermiticity).
    fn tolerance() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Scalar for f64 {
    #[inline]
    fn tolerance() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    #[inline]
    fn tolerance() -> Self {
        1e-4
    }
}

#[inline]
pub(crate) fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub(crate) fn norm_sqr<T: Scalar>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

#[inline]
pub(crate) fn modulus<T: Scalar>(z: Complex<T>) -> T {
    norm_sqr(z).sqrt()
}

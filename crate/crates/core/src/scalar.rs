//! Scalar abstraction shared by every numerical routine in the crate.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Real floating-point type the toolkit is generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + rustfft::FftNum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn n(k: usize) -> Self {
        Self::from_usize(k).expect("usize representable")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().expect("finite conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over a [`Scalar`].
pub type Cx<T> = Complex<T>;

#[inline]
pub fn cx<T: Scalar>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub fn re<T: Scalar>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn im_unit<T: Scalar>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

/// Principal-branch complex power `base^expo`, with `0^w = 0`.
pub fn cpow<T: Scalar>(base: Cx<T>, expo: Cx<T>) -> Cx<T> {
    if base.norm() == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    (expo * base.ln()).exp()
}

//! Scalar abstraction: every numeric routine in this crate is generic over
//! `Scalar`, implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::Float;

/// Floating-point scalar used for transforms, quantization arithmetic,
/// regression and metrics.
pub trait Scalar:
    Float + AddAssign + SubAssign + MulAssign + DivAssign + Sum + Debug + Display + Default + 'static
{
    /// Lossy conversion from `f64`, used for constants such as pi or the
    /// color-matrix coefficients.
    fn from_f64(x: f64) -> Self;
}

impl Scalar for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
}

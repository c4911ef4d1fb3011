//! Scalar abstractions.
//!
//! Boundary computations are generic over [`Real`], which is implemented for
//! `f32` and `f64`. Polynomial coefficient algebra only needs field
//! operations, so it is generic over the weaker [`Coefficient`] bound and
//! also works with exact rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed};
use rustfft::FftNum;

/// Floating point scalar used by every boundary operation: `f32` or `f64`.
pub trait Real:
    Coefficient + Float + FloatConst + FftNum + Default + Display + Sum + Send + Sync + 'static
{
    /// Machine epsilon as an `f64`, for diagnostics.
    fn epsilon_f64() -> f64
    where
        Self: Sized,
    {
        <Self as Float>::epsilon().to_f64().unwrap_or(f64::EPSILON)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Field-like scalar usable as a polynomial coefficient.
pub trait Coefficient:
    Num + Signed + Clone + PartialOrd + FromPrimitive + Debug + Send + Sync
{
}

impl<T> Coefficient for T where
    T: Num + Signed + Clone + PartialOrd + FromPrimitive + Debug + Send + Sync
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count or index into `T`.
#[inline]
pub fn count<T: Real>(k: usize) -> T {
    T::from_usize(k).expect("usize representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn dot<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn sub<T: Real>(a: [T; 2], b: [T; 2]) -> [T; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub(crate) fn norm<T: Real>(a: [T; 2]) -> T {
    a[0].hypot(a[1])
}

/// Clockwise quarter turn: maps a tangent onto the outward normal.
#[inline]
pub(crate) fn rotate_cw<T: Real>(a: [T; 2]) -> [T; 2] {
    [a[1], -a[0]]
}

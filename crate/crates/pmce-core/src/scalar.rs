//! Scalar abstraction: the crate is generic over the real field.
//!
//! Everything numeric is written against [`Scalar`], a thin alias over
//! `nalgebra::RealField` plus the conversions we need. `f32` and `f64`
//! satisfy it; `f64` is the default used by the harness (type aliases at the
//! crate root).
//!
//! Random draws are always taken in `f64` and converted afterwards, so a
//! seeded experiment visits the same sample path regardless of the scalar the
//! pipeline runs in.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the whole crate is generic over.
///
/// `RealField` supplies the transcendental functions and constants the models
/// need; `FromPrimitive`/`ToPrimitive` admit conversion to and from the `f64`
/// domain where random draws and error diagnostics live; `Copy` keeps the
/// linear algebra ergonomic.
pub trait Scalar: RealField + FromPrimitive + ToPrimitive + Copy {}

impl<T: RealField + FromPrimitive + ToPrimitive + Copy> Scalar for T {}

/// Convert an `f64` constant into the working scalar.
///
/// Panics only if the target type cannot represent finite doubles at all,
/// which no supported scalar triggers.
#[inline]
pub fn from64<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 must convert into the working scalar")
}

/// Convert a count into the working scalar (exact for the sizes used here).
#[inline]
pub fn fromcount<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count must convert into the working scalar")
}

/// Convert the working scalar back to `f64` (exact for `f32`/`f64`).
#[inline]
pub fn to64<T: Scalar>(x: T) -> f64 {
    x.to_f64().expect("working scalar must convert to f64")
}

/// Unit phasor `e^{jθ} = cos θ + j sin θ`.
#[inline]
pub fn cis<T: Scalar>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

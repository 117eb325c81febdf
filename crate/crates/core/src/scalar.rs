//! Scalar abstractions.
//!
//! Numerical code is written against [`Real`] (f32 or f64). The combinatorial
//! cumulant machinery only needs ring operations plus exact division, so it is
//! written against [`Field`], which also covers complex numbers and rationals.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign};

/// Floating point type used by the analytic parts of the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot hold
    /// finite f64 values, which no supported type does.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Tolerance floor: `tol` clamped from below by a few ulps of the type.
    fn tol(tol: f64) -> Self {
        Self::lit(tol).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Value type for moment/cumulant arithmetic.
pub trait Field: Num + Clone + FromPrimitive + Debug {}

impl<V: Num + Clone + FromPrimitive + Debug> Field for V {}

/// Shorthand for a real number embedded in the complex plane.
pub fn cplx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Converts an integer coefficient into a field element.
pub(crate) fn from_int<V: Field>(k: i64) -> V {
    V::from_i64(k).expect("integer coefficient representable in value field")
}

/// Absolute value as an `f64`, for residual reporting.
pub trait Modulus {
    fn modulus(&self) -> f64;
}

impl Modulus for f32 {
    fn modulus(&self) -> f64 {
        self.abs() as f64
    }
}

impl Modulus for f64 {
    fn modulus(&self) -> f64 {
        self.abs()
    }
}

impl<T: Real> Modulus for Complex<T> {
    fn modulus(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::NAN)
    }
}

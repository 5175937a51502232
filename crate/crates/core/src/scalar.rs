//! Scalar abstractions.
//!
//! Everything algebraic (commutators, polynomial arithmetic, truncated
//! series) is written against [`Scalar`], which is implemented for `f32`,
//! `f64` and the exact [`Rational`] type. Anything that needs `exp`, `sqrt`
//! or comparisons against a tolerance asks for [`Real`] instead.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

use crate::rational::Rational;

/// Conversion from an exact rational coefficient into the working scalar.
pub trait FromRational {
    fn from_rational(q: &Rational) -> Self;
}

/// A field element usable as a matrix entry.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + FromRational + Send + Sync + 'static
{
    /// Magnitude as `f64`, used for norms and reporting only.
    fn magnitude(&self) -> f64;
}

/// Floating point scalars: `f32` or `f64`.
pub trait Real: Scalar + Float + FromPrimitive + LowerExp + Copy {
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 converts")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromRational for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromRational for f32 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().map(|x| x as f32).unwrap_or(f32::NAN)
    }
}

impl FromRational for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Scalar for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for f32 {
    fn magnitude(&self) -> f64 {
        f64::from(self.abs())
    }
}

impl Scalar for Rational {
    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

impl Real for f64 {}
impl Real for f32 {}

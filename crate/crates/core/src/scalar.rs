//! Field abstraction shared by the exact (rational) and floating-point code paths.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Pivot threshold used by the floating-point elimination routines.
pub const FLOAT_PIVOT_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Magnitude used to rank pivot candidates.
    fn magnitude(&self) -> f64;
    /// Exact zero for rationals, below [`FLOAT_PIVOT_TOL`] for floats.
    fn is_negligible(&self) -> bool;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(&Rational::from_integer(BigInt::from(v)))
    }
}

impl Scalar for f64 {
    fn from_ratio(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_negligible(&self) -> bool {
        self.abs() < FLOAT_PIVOT_TOL
    }
}

impl Scalar for Rational {
    fn from_ratio(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn magnitude(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

/// `num / den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

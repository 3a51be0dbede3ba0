use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Field-like coefficient type shared by every algebraic structure in the crate.
///
/// Implemented by the exact [`Scalar`](super::Scalar) and by `f64`. Exact
/// implementations must make `is_zero` decidable.
pub trait Coeff:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn checked_div(&self, rhs: &Self) -> Result<Self>;

    /// Size used for pivoting and residual reports. Zero iff `is_zero`.
    fn magnitude(&self) -> f64;

    /// True when arithmetic is exact, so residuals can be compared against zero.
    fn is_exact() -> bool;

    /// Numeric value, when the scalar is a plain number (not a function of a formal `q`).
    fn to_f64(&self) -> Option<f64>;

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_exact() -> bool {
        false
    }
    fn to_f64(&self) -> Option<f64> {
        Some(*self)
    }
    fn pow(&self, n: u32) -> Self {
        self.powi(n as i32)
    }
}

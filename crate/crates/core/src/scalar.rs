//! Scalar abstraction shared by the polynomial and linear-algebra layers.
//!
//! Everything in this crate is generic over [`Scalar`]. The exact instantiation
//! ([`crate::Rational`]) is the one that certifies dimensions: ranks, kernels and
//! echelon forms test coefficients for exact zero, which is only meaningful when
//! arithmetic is exact. Floating-point instantiations are supported for the
//! polynomial algebra (evaluation, d, wedge, integration) where rounding is harmless.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num, NumAssignRef};

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Num
    + NumAssignRef
    + Neg<Output = Self>
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer literal fits the scalar type")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }

    /// `self * other` without consuming either operand.
    fn times(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out *= other;
        out
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out += other;
        out
    }

    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out -= other;
        out
    }

    fn over(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out /= other;
        out
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + PartialOrd
        + Num
        + NumAssignRef
        + Neg<Output = Self>
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Binomial coefficient with the convention `C(a, b) = 0` whenever `a < b`, `a < 0` or `b < 0`.
pub fn binomial(a: i64, b: i64) -> u128 {
    if a < 0 || b < 0 || a < b {
        return 0;
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(4, -1), 0);
    }

    #[test]
    fn rational_helpers() {
        let half = Rational::ratio(1, 2);
        assert_eq!(half.plus(&half), Rational::int(1));
        assert_eq!(half.times(&Rational::int(4)), Rational::int(2));
        assert!(half.is_positive());
        assert_eq!(f64::ratio(3, 4), 0.75);
    }
}

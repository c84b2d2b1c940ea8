//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Belief arithmetic, simplex grids, and projections are written once,
//! generic over the probability scalar. The engine runs Bellman sweeps in
//! `f64` for speed; the oracle and the model layer use exact rationals so
//! that row sums, `delta_min`, and value comparisons carry no rounding.

use std::fmt;

use num_traits::{Num, Signed, ToPrimitive};

use crate::Rational;

/// Probability scalar: implemented by `f64` (engine mode) and by
/// [`Rational`] (exact mode).
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Convert an exact rational into this scalar (rounding if lossy).
    fn from_ratio(r: &Rational) -> Self;

    /// Build the fraction `num / den`.
    fn ratio_of(num: u64, den: u64) -> Self;

    /// Lossy view for reporting and float-mode comparisons.
    fn to_f64_lossy(&self) -> f64;

    /// Integer floor of a nonnegative scalar.
    fn floor_u64(&self) -> u64;

    /// True for exact scalars; lets callers pick tolerances.
    const EXACT: bool;
}

impl Scalar for f64 {
    fn from_ratio(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn ratio_of(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn floor_u64(&self) -> u64 {
        debug_assert!(*self >= 0.0);
        self.floor() as u64
    }

    const EXACT: bool = false;
}

impl Scalar for Rational {
    fn from_ratio(r: &Rational) -> Self {
        r.clone()
    }

    fn ratio_of(num: u64, den: u64) -> Self {
        Rational::new(num.into(), den.into())
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn floor_u64(&self) -> u64 {
        self.floor().to_integer().to_u64().expect("nonnegative floor")
    }

    const EXACT: bool = true;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_roundtrips() {
        let third = Rational::ratio_of(1, 3);
        assert_eq!(third, Rational::new(1.into(), 3.into()));
        assert!((f64::from_ratio(&third) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn floor_matches_between_modes() {
        let r = Rational::ratio_of(7, 2);
        assert_eq!(r.floor_u64(), 3);
        assert_eq!(3.5f64.floor_u64(), 3);
    }
}

//! Coefficient rings for algebra elements.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Zero};

/// An exact field of characteristic zero.
///
/// Floating point types are deliberately not implemented: every algorithm here
/// relies on exact zero tests.
pub trait Scalar: Num + Neg<Output = Self> + Clone + PartialEq + Debug + Send + Sync + 'static {
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Always `n/d` with `d > 0`, reduced.
    fn to_fraction_string(&self) -> String;

    fn parse_fraction(s: &str) -> Option<Self>;
}

fn split_fraction(s: &str) -> (&str, &str) {
    match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_fraction(s: &str) -> Option<Self> {
        let (a, b) = split_fraction(s);
        let n: BigInt = a.parse().ok()?;
        let d: BigInt = b.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Ratio::new(n, d))
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_fraction(s: &str) -> Option<Self> {
        let (a, b) = split_fraction(s);
        let n: i64 = a.parse().ok()?;
        let d: i64 = b.parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Ratio::new(n, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};

    #[test]
    fn fraction_round_trip() {
        let x = BigRational::from_ratio(-6, 4);
        assert_eq!(x.to_fraction_string(), "-3/2");
        assert_eq!(BigRational::parse_fraction("-3/2"), Some(x));
        assert_eq!(BigRational::parse_fraction("5").unwrap(), BigRational::from_int(5));
        assert!(BigRational::parse_fraction("1/0").is_none());
        let y = Ratio::<i64>::from_ratio(2, 6);
        assert_eq!(y.to_fraction_string(), "1/3");
        assert!(y.is_positive() && !y.is_one());
    }
}

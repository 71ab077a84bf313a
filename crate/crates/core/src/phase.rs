//! Elements of ℚ/ℤ, used as exact values of linear characters.
//!
//! A value `a/b` with `0 <= a < b` stands for the root of unity `exp(2πi·a/b)`.
//! The group is written additively.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;

use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Phase {
    num: u32,
    den: u32,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// Reduces `num/den` modulo 1.
    pub fn new(num: i64, den: u32) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let d = den as i64;
        let n = num.rem_euclid(d);
        let g = n.gcd(&d).max(1);
        Phase {
            num: (n / g) as u32,
            den: (d / g) as u32,
        }
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Order of the value as an element of ℚ/ℤ.
    pub fn order(self) -> u32 {
        self.den
    }

    /// `k`-fold multiple.
    pub fn times(self, k: i64) -> Phase {
        Phase::new((self.num as i64) * k, self.den)
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        if self.den == rhs.den {
            return Phase::new(self.num as i64 + rhs.num as i64, self.den);
        }
        let l = self.den.lcm(&rhs.den);
        let a = self.num as i64 * (l / self.den) as i64;
        let b = rhs.num as i64 * (l / rhs.den) as i64;
        Phase::new(a + b, l)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-(self.num as i64), self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

// Ordered by numeric value in [0, 1).
impl Ord for Phase {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u64 * other.den as u64).cmp(&(other.num as u64 * self.den as u64))
    }
}

impl PartialOrd for Phase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("invalid phase {s:?}"));
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let num: i64 = a.parse().map_err(|_| bad())?;
        let den: u32 = b.parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ok(Phase::new(num, den))
    }
}

/// Least common multiple of the orders of a list of phases (1 for an empty list).
pub fn common_order<'a>(values: impl IntoIterator<Item = &'a Phase>) -> u32 {
    values.into_iter().fold(1u32, |acc, v| acc.lcm(&v.den))
}

//! Checked `i128` fractions for hot loops over small exact values.
//!
//! Every operation is exact or reports overflow; nothing is rounded.

use std::cmp::Ordering;

use num::{BigInt, Integer, One, ToPrimitive};

use super::{QVector, Rational};
use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::Unsupported("value exceeds the 128-bit fast path".into())
}

fn small(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(overflow)
}

/// `num / den` with `den > 0`, not necessarily reduced.
#[derive(Clone, Copy, Debug)]
pub struct SmallFrac {
    num: i128,
    den: i128,
}

impl SmallFrac {
    pub fn from_rational(x: &Rational) -> Result<Self> {
        Ok(Self {
            num: small(x.numer())?,
            den: small(x.denom())?,
        })
    }

    pub fn times(self, n: u64) -> Result<Self> {
        let n = i128::from(n);
        Ok(Self {
            num: self.num.checked_mul(n).ok_or_else(overflow)?,
            den: self.den,
        })
    }

    pub fn minus(self, o: Self) -> Result<Self> {
        let a = self.num.checked_mul(o.den).ok_or_else(overflow)?;
        let b = o.num.checked_mul(self.den).ok_or_else(overflow)?;
        Ok(Self {
            num: a.checked_sub(b).ok_or_else(overflow)?,
            den: self.den.checked_mul(o.den).ok_or_else(overflow)?,
        })
    }

    pub fn compare(self, o: Self) -> Result<Ordering> {
        let a = self.num.checked_mul(o.den).ok_or_else(overflow)?;
        let b = o.num.checked_mul(self.den).ok_or_else(overflow)?;
        Ok(a.cmp(&b))
    }

    pub fn is_positive(self) -> bool {
        self.num > 0
    }

    pub fn is_negative(self) -> bool {
        self.num < 0
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

/// A vector `nums / den` with a common denominator `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallVector {
    nums: Vec<i128>,
    den: i128,
}

impl SmallVector {
    pub fn new(v: &[Rational]) -> Result<Self> {
        let den = v
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let nums = v
            .iter()
            .map(|x| small(&(x.numer() * (&den / x.denom()))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            nums,
            den: small(&den)?,
        })
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    /// Exact `self . other`.
    pub fn dot(&self, other: &SmallVector) -> Result<SmallFrac> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "dot of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let mut num: i128 = 0;
        for (a, b) in self.nums.iter().zip(&other.nums) {
            let p = a.checked_mul(*b).ok_or_else(overflow)?;
            num = num.checked_add(p).ok_or_else(overflow)?;
        }
        let den = self.den.checked_mul(other.den).ok_or_else(overflow)?;
        Ok(SmallFrac { num, den })
    }

    pub fn to_rationals(&self) -> QVector {
        self.nums
            .iter()
            .map(|&x| Rational::new(BigInt::from(x), BigInt::from(self.den)))
            .collect()
    }
}

//! Exact rational scalars, vectors, matrices and subspaces.
//!
//! Scalars are arbitrary-precision fractions kept in lowest terms with a
//! positive denominator. Vectors are plain `Vec<Rational>` coordinate lists;
//! a vector and a linear functional on the same space are paired by the
//! standard dot product.

mod matrix;
pub mod small;
mod subspace;

pub use matrix::{block_coefficient_matrix, invert, solve, QMatrix};
pub use subspace::Subspace;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact fraction. Always normalized: `gcd(numer, denom) = 1`, `denom > 0`.
pub type Rational = BigRational;

/// Coordinate vector over the rationals.
pub type QVector = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vec(n: usize) -> QVector {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> QVector {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn int_vec(xs: &[i64]) -> QVector {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn checked_dot(a: &[Rational], b: &[Rational]) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "pairing vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dot(a, b))
}

pub fn add(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> QVector {
    a.iter().map(|x| x * s).collect()
}

/// `acc += s * v`, in place.
pub fn axpy(acc: &mut [Rational], s: &Rational, v: &[Rational]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += s * x;
        }
    }
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Positive rescaling of `v` to the unique primitive integer vector on the
/// same open ray. The zero vector maps to itself.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd).collect()
}

/// Primitive integer representative, returned as rationals.
pub fn primitive(v: &[Rational]) -> QVector {
    primitive_integer(v)
        .into_iter()
        .map(Rational::from_integer)
        .collect()
}

/// `"p/q"` rendering, or `"p"` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |message: &str| Error::Parse {
        position: 0,
        message: format!("{message}: {s:?}"),
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err("bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn is_nonneg(x: &Rational) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_normalized() {
        let x = frac(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        let y = &x + frac(1, 2);
        assert_eq!(y, int(-1));
        assert!(y.denom() > &BigInt::zero());
    }

    #[test]
    fn primitive_rescaling() {
        let v = vec![frac(1, 2), frac(-1, 3), int(0)];
        assert_eq!(primitive(&v), int_vec(&[3, -2, 0]));
        assert_eq!(primitive(&int_vec(&[4, 6])), int_vec(&[2, 3]));
        assert_eq!(primitive(&zero_vec(2)), zero_vec(2));
    }

    #[test]
    fn fraction_strings_round_trip() {
        for s in ["2/3", "-5", "0", "-7/12"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), frac(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}

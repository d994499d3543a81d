//! Exact coefficient fields.
//!
//! Every coefficient is a [`BigRational`]. Over a prime field the stored value
//! is always the canonical integer representative in `0..p`, so equality and
//! hashing stay structural.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

pub type Scalar = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p")]
#[derive(Default)]
pub enum FieldSpec {
    #[default]
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.reduce_int(&BigInt::from(n))
    }

    fn reduce_int(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::from_integer(n.clone()),
            FieldSpec::Prime(p) => Scalar::from_integer(n.mod_floor(&BigInt::from(*p))),
        }
    }

    /// Maps an arbitrary rational into the field.
    pub fn element(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => Ok(q.clone()),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(*p);
                let den = q.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(AlgebraError::BadDenominator { value: format_scalar(q), p: *p });
                }
                let num = q.numer().mod_floor(&pb);
                let inv = mod_inverse(den.to_u64().unwrap(), *p);
                Ok(Scalar::from_integer((num * BigInt::from(inv)).mod_floor(&pb)))
            }
        }
    }

    #[inline]
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a + b)
    }

    #[inline]
    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a - b)
    }

    #[inline]
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a * b)
    }

    #[inline]
    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.norm(-a)
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        match self {
            FieldSpec::Rationals => Ok(a.recip()),
            FieldSpec::Prime(p) => {
                let v = a.numer().to_u64().expect("canonical residue");
                Ok(Scalar::from_integer(BigInt::from(mod_inverse(v, *p))))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Division by a small positive integer (cyclic multiplicities, degrees).
    pub fn div_int(&self, a: &Scalar, n: i64) -> Result<Scalar> {
        if let FieldSpec::Prime(p) = self {
            if *p < 7 {
                log::warn!("dividing by {n} in characteristic {p}");
            }
        }
        self.div(a, &self.from_int(n))
    }

    #[inline]
    fn norm(&self, v: Scalar) -> Scalar {
        match self {
            FieldSpec::Rationals => v,
            FieldSpec::Prime(p) => {
                debug_assert!(v.is_integer());
                Scalar::from_integer(v.numer().mod_floor(&BigInt::from(*p)))
            }
        }
    }

    /// Some `r` with `r^k = a`, if the field has one (search for small primes).
    pub fn root(&self, a: &Scalar, k: u32) -> Option<Scalar> {
        match self {
            FieldSpec::Rationals => match k {
                2 => rational_sqrt(a),
                3 => rational_cube_root(a),
                _ => None,
            },
            FieldSpec::Prime(p) if *p <= 1 << 20 => {
                let target = self.residue(a);
                (0..*p).find(|&r| pow_mod(r, k as u64, *p) == target).map(|r| self.from_int(r as i64))
            }
            FieldSpec::Prime(_) => None,
        }
    }

    /// Residue as `u64`; only meaningful over prime fields.
    pub fn residue(&self, a: &Scalar) -> u64 {
        match self {
            FieldSpec::Prime(_) => a.numer().to_u64().expect("canonical residue"),
            FieldSpec::Rationals => panic!("residue requested over the rationals"),
        }
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

pub fn format_scalar(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_scalar(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Exact rational cube root, if one exists.
pub fn rational_cube_root(q: &BigRational) -> Option<BigRational> {
    let n = integer_root(q.numer(), 3)?;
    let d = integer_root(q.denom(), 3)?;
    Some(BigRational::new(n, d))
}

/// Exact rational square root, if one exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = integer_root(q.numer(), 2)?;
    let d = integer_root(q.denom(), 2)?;
    Some(BigRational::new(n, d))
}

fn integer_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let neg = n.is_negative();
    if neg && k.is_multiple_of(2) {
        return None;
    }
    let r = n.abs().nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == n.abs() {
        Some(if neg { -r } else { r })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(5).unwrap();
        let a = f.from_int(3);
        let b = f.from_int(4);
        assert_eq!(f.add(&a, &b), f.from_int(2));
        assert_eq!(f.mul(&a, &b), f.from_int(2));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert_eq!(f.element(&q(1, 2)).unwrap(), f.from_int(3));
        assert!(f.element(&q(1, 5)).is_err());
    }

    #[test]
    fn primality_and_zero_division() {
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(2).is_ok());
        assert_eq!(FieldSpec::Rationals.inv(&q(0, 1)), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn roots_and_formatting() {
        assert_eq!(rational_cube_root(&q(-27, 8)), Some(q(-3, 2)));
        assert_eq!(rational_cube_root(&q(2, 1)), None);
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&q(-1, 1)), None);
        assert_eq!(format_scalar(&q(-6, 4)), "-3/2");
        assert_eq!(parse_scalar("-3/2"), Some(q(-3, 2)));
        assert_eq!(parse_scalar("7"), Some(q(7, 1)));
    }
}

//! Exact coefficient fields: prime fields of odd characteristic and the
//! rationals.
//!
//! A [`Scalar`] carries no reference to its field; every operation goes
//! through a [`FieldCtx`], which keeps values canonical (residues in `[0, p)`,
//! fractions in lowest terms).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest admissible prime (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not an odd prime below 2^31")]
    NotOddPrime(u64),
    #[error("attempt to invert zero")]
    ZeroInverse,
    #[error("arity mismatch: expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomial degree {0} exceeds the supported maximum of 3")]
    DegreeTooHigh(usize),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("scalars from different fields")]
    ContextMismatch,
}

/// An exact coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldCtx {
    Prime(u32),
    Rationals,
}

/// A canonical field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp(u32),
    Q(Box<BigRational>),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// The prime field of characteristic `p`; `p` must be an odd prime.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 2 || p >= MAX_PRIME || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        Ok(FieldCtx::Prime(p as u32))
    }

    pub fn rationals() -> Self {
        FieldCtx::Rationals
    }

    /// `p = 0` selects the rationals.
    pub fn from_characteristic(p: u64) -> Result<Self, FieldError> {
        if p == 0 {
            Ok(FieldCtx::Rationals)
        } else {
            Self::prime(p)
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldCtx::Prime(p) => *p,
            FieldCtx::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldCtx::Prime(_) => Scalar::Fp(0),
            FieldCtx::Rationals => Scalar::Q(Box::new(BigRational::zero())),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldCtx::Prime(p) => Scalar::Fp(n.rem_euclid(*p as i64) as u32),
            FieldCtx::Rationals => Scalar::Q(Box::new(BigRational::from_integer(BigInt::from(n)))),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldCtx::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Fp(r.to_u32().expect("residue fits in u32"))
            }
            FieldCtx::Rationals => Scalar::Q(Box::new(BigRational::from_integer(n.clone()))),
        }
    }

    /// `num / den` in this field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        let d = self.from_i64(den);
        let inv = self.inv(&d)?;
        Ok(self.mul(&self.from_i64(num), &inv))
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
        match self {
            FieldCtx::Prime(_) => {
                let n = self.from_bigint(q.numer());
                let d = self.from_bigint(q.denom());
                Ok(self.mul(&n, &self.inv(&d)?))
            }
            FieldCtx::Rationals => Ok(Scalar::Q(Box::new(q.clone()))),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(x) => *x == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(x) => *x == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    /// True when `a` is a canonical element of this field.
    pub fn owns(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldCtx::Prime(p), Scalar::Fp(x)) => x < p,
            (FieldCtx::Rationals, Scalar::Q(_)) => true,
            _ => false,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldCtx::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            (FieldCtx::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(Box::new(&**x + &**y)),
            _ => panic!("{}", FieldError::ContextMismatch),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldCtx::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u64 + *p as u64 - *y as u64) % *p as u64) as u32)
            }
            (FieldCtx::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(Box::new(&**x - &**y)),
            _ => panic!("{}", FieldError::ContextMismatch),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldCtx::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            (FieldCtx::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(Box::new(&**x * &**y)),
            _ => panic!("{}", FieldError::ContextMismatch),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldCtx::Prime(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (FieldCtx::Rationals, Scalar::Q(x)) => Scalar::Q(Box::new(-&**x)),
            _ => panic!("{}", FieldError::ContextMismatch),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::ZeroInverse);
        }
        match (self, a) {
            (FieldCtx::Prime(p), Scalar::Fp(x)) => Ok(Scalar::Fp(inv_mod(*x, *p))),
            (FieldCtx::Rationals, Scalar::Q(x)) => Ok(Scalar::Q(Box::new(x.recip()))),
            _ => Err(FieldError::ContextMismatch),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Binomial coefficient `C(n, k)` mapped into the field; zero outside
    /// `0 <= k <= n`.
    pub fn binomial(&self, n: i64, k: i64) -> Scalar {
        if n < 0 || k < 0 || k > n {
            return self.zero();
        }
        let k = k.min(n - k);
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        self.from_bigint(&acc)
    }

    /// A square root of `a` lying in this field, if one exists.
    pub fn sqrt(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (FieldCtx::Prime(p), Scalar::Fp(x)) => {
                (0..*p as u64).find(|r| r * r % *p as u64 == *x as u64).map(|r| Scalar::Fp(r as u32))
            }
            (FieldCtx::Rationals, Scalar::Q(q)) => {
                if q.is_negative() {
                    return None;
                }
                let n = q.numer().sqrt();
                let d = q.denom().sqrt();
                if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
                    Some(Scalar::Q(Box::new(BigRational::new(n, d))))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Parses a decimal integer or fraction `a/b`, reducing into the field.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let err = || FieldError::Parse(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        self.from_rational(&BigRational::new(num, den)).map_err(|_| err())
    }

    /// Every element of the prime field, in increasing residue order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldCtx::Prime(p) => Some((0..*p).map(Scalar::Fp).collect()),
            FieldCtx::Rationals => None,
        }
    }

    /// The representative of `a` in `(-p/2, p/2]`, or the integer value of a
    /// rational with denominator one.
    pub fn to_symmetric_i64(&self, a: &Scalar) -> Option<i64> {
        match (self, a) {
            (FieldCtx::Prime(p), Scalar::Fp(x)) => {
                let (x, p) = (*x as i64, *p as i64);
                Some(if x > p / 2 { x - p } else { x })
            }
            (FieldCtx::Rationals, Scalar::Q(q)) if q.is_integer() => q.numer().to_i64(),
            _ => None,
        }
    }
}

fn inv_mod(x: u32, p: u32) -> u32 {
    let (mut a, mut b) = (x as i64, p as i64);
    let (mut u, mut v) = (1i64, 0i64);
    while b != 0 {
        let q = a / b;
        (a, b) = (b, a - q * b);
        (u, v) = (v, u - q * v);
    }
    u.rem_euclid(p as i64) as u32
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Prime(p) => write!(f, "F{p}"),
            FieldCtx::Rationals => write!(f, "Q"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_composite_characteristic() {
        assert_eq!(FieldCtx::prime(2), Err(FieldError::NotOddPrime(2)));
        assert_eq!(FieldCtx::prime(9), Err(FieldError::NotOddPrime(9)));
        assert_eq!(FieldCtx::prime(1), Err(FieldError::NotOddPrime(1)));
        assert!(FieldCtx::prime(2_147_483_647).is_ok());
        assert!(FieldCtx::prime(1 << 31).is_err());
    }

    #[test]
    fn inverse_examples() {
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.inv(&f5.from_i64(2)).unwrap(), f5.from_i64(3));
        let q = FieldCtx::rationals();
        assert_eq!(q.inv(&q.one()).unwrap(), q.one());
        assert_eq!(f5.inv(&f5.one()).unwrap(), f5.one());
        assert_eq!(f5.inv(&f5.zero()), Err(FieldError::ZeroInverse));
        assert_eq!(q.inv(&q.zero()), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn inverse_of_three_mod_seven_matches_scan() {
        let f7 = FieldCtx::prime(7).unwrap();
        // brute-force oracle
        let expected = (1..7u32).find(|r| (3 * r) % 7 == 1).unwrap();
        assert_eq!(expected, 5);
        assert_eq!(f7.inv(&f7.from_i64(3)).unwrap(), Scalar::Fp(expected));
    }

    #[test]
    fn parse_and_display() {
        let q = FieldCtx::rationals();
        let half = q.parse("-2/4").unwrap();
        assert_eq!(half.to_string(), "-1/2");
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.parse("1/2").unwrap(), Scalar::Fp(3));
        assert_eq!(f5.parse("-1").unwrap(), Scalar::Fp(4));
        assert!(f5.parse("1/5").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn binomials_reduce() {
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.binomial(5, 2), Scalar::Fp(0));
        assert_eq!(f5.binomial(4, 2), Scalar::Fp(1));
        assert_eq!(f5.binomial(3, 4), Scalar::Fp(0));
        assert_eq!(f5.binomial(3, -1), Scalar::Fp(0));
    }

    #[test]
    fn square_roots() {
        let f5 = FieldCtx::prime(5).unwrap();
        assert!(f5.sqrt(&f5.from_i64(4)).is_some());
        assert!(f5.sqrt(&f5.from_i64(2)).is_none());
        let q = FieldCtx::rationals();
        assert_eq!(q.sqrt(&q.parse("9/4").unwrap()), Some(q.parse("3/2").unwrap()));
        assert!(q.sqrt(&q.from_i64(2)).is_none());
    }
}

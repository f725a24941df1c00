//! Exact ground fields: the rationals and prime fields F_p.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Serializable description of a ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self, Error> {
        if is_prime(p as u64) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p as u64))
        }
    }

    /// Accepts `Q`, `Fp:<p>`, `F<p>` and `GF(<p>)`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| Error::Parse(format!("unknown field `{}`", s)))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime in field `{}`", s)))?;
        FieldSpec::prime(p)
    }

    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p as u64),
        }
    }
}

impl core::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{}", p),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic context for a field. Elements are plain values; the context
/// carries whatever is needed to operate on them (the modulus for F_p).
pub trait Field: Clone + PartialEq + Eq + Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Ord + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn parse(&self, s: &str) -> Result<Self::Elem, Error>;
    fn format(&self, a: &Self::Elem) -> String;

    /// Number of elements, `None` for an infinite field.
    fn size(&self) -> Option<u64>;
    /// The `i`-th element in a fixed enumeration (finite fields only).
    fn element(&self, i: u64) -> Self::Elem;
    /// Inverse of [`Field::element`].
    fn index(&self, a: &Self::Elem) -> u64;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `acc + a*b`
    fn mul_add(&self, acc: &Self::Elem, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(acc, &self.mul(a, b))
    }
}

/// F_p for a prime p < 2^31, elements are canonical residues in [0, p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, Error> {
        if p >= 1 << 31 || !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let p = self.p as u64;
        let mut r = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a as u64, self.p as u64 - 2) as u32)
        }
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn parse(&self, s: &str) -> Result<u32, Error> {
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n = self.parse(n)?;
            let d = self.parse(d)?;
            let di = self
                .inv(&d)
                .ok_or_else(|| Error::Parse(format!("zero denominator in `{}`", s)))?;
            return Ok(self.mul(&n, &di));
        }
        let v: i64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad F_{} element `{}`", self.p, s)))?;
        Ok(self.from_i64(v))
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn size(&self) -> Option<u64> {
        Some(self.p as u64)
    }
    fn element(&self, i: u64) -> u32 {
        (i % self.p as u64) as u32
    }
    fn index(&self, a: &u32) -> u64 {
        *a as u64
    }
    #[inline]
    fn mul_add(&self, acc: &u32, a: &u32, b: &u32) -> u32 {
        ((*acc as u64 + *a as u64 * *b as u64) % self.p as u64) as u32
    }
}

/// The rationals, elements are reduced big fractions with positive denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse(&self, s: &str) -> Result<BigRational, Error> {
        let t = s.trim();
        let bad = || Error::Parse(format!("bad rational `{}`", s));
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
        }
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn size(&self) -> Option<u64> {
        None
    }
    /// Enumerates 0, 1, -1, 2, -2, ... (used for grid sampling).
    fn element(&self, i: u64) -> BigRational {
        let k = (i as i64 + 1) / 2;
        self.from_i64(if i % 2 == 1 { k } else { -k })
    }
    fn index(&self, a: &BigRational) -> u64 {
        let n: i64 = a.numer().try_into().unwrap_or(0);
        if n > 0 {
            (2 * n - 1) as u64
        } else {
            (-2 * n) as u64
        }
    }
}

/// True when the rational is an integer.
pub fn is_integral(a: &BigRational) -> bool {
    a.denom().is_one()
}

/// True when the rational is non-negative.
pub fn is_nonneg(a: &BigRational) -> bool {
    !a.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7u32 {
            let b = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &b), 1);
        }
        assert!(f.inv(&0).is_none());
    }

    #[test]
    fn residues_are_canonical() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.parse("12").unwrap(), 2);
        assert_eq!(f.parse("1/2").unwrap(), 3);
        assert_eq!(f.sub(&1, &3), 3);
    }

    #[test]
    fn rationals_reduce() {
        let q = Rationals;
        let a = q.parse("6/-4").unwrap();
        assert_eq!(q.format(&a), "-3/2");
        assert_eq!(q.format(&q.parse("4/2").unwrap()), "2");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("Fp:5").unwrap(), FieldSpec::Prime(5));
        assert_eq!(FieldSpec::parse("F3").unwrap(), FieldSpec::Prime(3));
        assert!(FieldSpec::parse("Fp:4").is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn rational_grid_enumeration_round_trips() {
        let q = Rationals;
        for i in 0..20 {
            assert_eq!(q.index(&q.element(i)), i);
        }
    }
}

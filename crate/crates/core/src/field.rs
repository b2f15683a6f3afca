//! Exact scalar fields: prime fields GF(p) with word-sized arithmetic and the
//! rationals backed by arbitrary-precision integers.
//!
//! Every linear-algebra routine in the crate is generic over [`Field`]. The
//! field value itself is carried alongside the data (a `PrimeField` knows its
//! modulus), so element types stay small.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Runtime description of a field, as written in files and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u32),
    Rationals,
}

impl FieldSpec {
    /// Validates the modulus of a prime field.
    pub fn prime(p: u32) -> Result<Self> {
        PrimeField::new(p).map(|f| f.spec())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "gf:{p}"),
            FieldSpec::Rationals => f.write_str("q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = s
            .strip_prefix("gf:")
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}` (expected gf:p or q)")))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in field `{s}`")))?;
        FieldSpec::prime(p)
    }
}

impl serde::Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact field arithmetic.
///
/// Elements are plain values; all operations go through the field so that a
/// prime field can reduce modulo its own `p`.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;

    /// Number of elements, `None` for an infinite field.
    fn order(&self) -> Option<u64>;
    /// The `index`-th element in the canonical enumeration `0, 1, …, q−1` of a
    /// finite field. Only meaningful when `index < order()`.
    fn element(&self, index: u64) -> Self::Elem;
    /// Uniform sample for finite fields; for the rationals an integer drawn
    /// uniformly from `[-bound, bound]`.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: u64) -> Self::Elem;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// `dst += c * src`, elementwise.
    fn axpy(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.add(d, &self.mul(c, s));
            }
        }
    }

    fn scale(&self, v: &mut [Self::Elem], c: &Self::Elem) {
        for x in v.iter_mut() {
            *x = self.mul(x, c);
        }
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// GF(p) for a prime `2 ≤ p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u64;
        let mut b = base as u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u32
    }
}

/// Trial division; adequate for `p < 2^31` (at most ~46k divisions).
fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
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
            self.p - a
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p as u64 - 2))
        }
    }

    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i64(v)
    }

    fn order(&self) -> Option<u64> {
        Some(self.p as u64)
    }

    fn element(&self, index: u64) -> u32 {
        (index % self.p as u64) as u32
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, _bound: u64) -> u32 {
        rng.gen_range(0..self.p)
    }

    fn parse_elem(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.parse().map_err(|_| Error::Parse(format!("bad entry `{s}`")))?;
            let d: i64 = d.parse().map_err(|_| Error::Parse(format!("bad entry `{s}`")))?;
            let d = self.reduce_i64(d);
            let inv = self
                .inv(&d)
                .ok_or_else(|| Error::Parse(format!("denominator of `{s}` vanishes mod {}", self.p)))?;
            return Ok(self.mul(&self.reduce_i64(n), &inv));
        }
        let v: i64 = s.parse().map_err(|_| Error::Parse(format!("bad entry `{s}`")))?;
        Ok(self.reduce_i64(v))
    }

    fn format_elem(&self, a: &u32) -> String {
        a.to_string()
    }

    #[inline]
    fn axpy(&self, dst: &mut [u32], c: &u32, src: &[u32]) {
        if *c == 0 {
            return;
        }
        let p = self.p as u64;
        let c = *c as u64;
        for (d, s) in dst.iter_mut().zip(src) {
            if *s != 0 {
                *d = ((*d as u64 + c * *s as u64) % p) as u32;
            }
        }
    }
}

/// The field of rational numbers.
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

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
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

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn element(&self, index: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(index))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: u64) -> BigRational {
        let b = bound.min(i64::MAX as u64) as i64;
        self.from_i64(rng.gen_range(-b..=b))
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        crate::rational::parse_ratio(s)
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn axpy(&self, dst: &mut [BigRational], c: &BigRational, src: &[BigRational]) {
        if c.is_zero() {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d += c * s;
            }
        }
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_oversized_moduli() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(2_147_483_647).is_ok()); // 2^31 − 1
        assert!(PrimeField::new(u32::MAX).is_err());
        assert!(matches!(PrimeField::new(91), Err(Error::NotPrime(91))));
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
    }

    #[test]
    fn field_spec_round_trip() {
        for s in ["gf:2", "gf:101", "q"] {
            let spec: FieldSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("gf:4".parse::<FieldSpec>().is_err());
        assert!("r".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn prime_field_inverse_and_parse() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101u32 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert_eq!(f.parse_elem("-2").unwrap(), 99);
        assert_eq!(f.parse_elem("3/4").unwrap(), f.mul(&3, &f.inv(&4).unwrap()));
        assert!(f.parse_elem("1/101").is_err());
    }

    #[test]
    fn rational_format_is_canonical() {
        let q = Rationals;
        let a = q.parse_elem("6/8").unwrap();
        assert_eq!(q.format_elem(&a), "3/4");
        assert_eq!(q.format_elem(&q.parse_elem("-4/2").unwrap()), "-2");
        assert_eq!(q.format_elem(&q.parse_elem("3/-4").unwrap()), "-3/4");
    }
}

//! Exact field arithmetic over ℚ and prime fields F_p.
//!
//! A [`FieldSpec`] describes the field; a [`Scalar`] is one of its elements.
//! Rationals are arbitrary precision and always kept in lowest terms, prime
//! field elements are canonical residues in `[0, p)`. Mixing elements from
//! different fields in an arithmetic operator is a programming error and
//! panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Rationals,
    PrimeField(u64),
}

/// Descriptor of the base field. Prime moduli are validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    kind: FieldKind,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec {
        kind: FieldKind::Rationals,
    };

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(FieldSpec {
            kind: FieldKind::PrimeField(p),
        })
    }

    pub fn make(kind: FieldKind) -> Result<Self> {
        match kind {
            FieldKind::Rationals => Ok(Self::rationals()),
            FieldKind::PrimeField(p) => Self::prime(p),
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Rationals => 0,
            FieldKind::PrimeField(p) => p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, FieldKind::PrimeField(_))
    }

    /// Number of elements, `None` for ℚ.
    pub fn order(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Rationals => None,
            FieldKind::PrimeField(p) => Some(p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.kind {
            FieldKind::Rationals => Scalar(Repr::Rational(BigRational::from_integer(v.into()))),
            FieldKind::PrimeField(p) => Scalar::modular(v.rem_euclid(p as i64) as u64, p),
        }
    }

    /// Residue `v mod p`, or the integer `v` over ℚ.
    pub fn from_u64(&self, v: u64) -> Scalar {
        match self.kind {
            FieldKind::Rationals => Scalar(Repr::Rational(BigRational::from_integer(v.into()))),
            FieldKind::PrimeField(p) => Scalar::modular(v % p, p),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Parses a decimal integer or `a/b` literal into this field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::InvalidScalar(text.to_string());
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (t, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self.kind {
            FieldKind::Rationals => Ok(Scalar(Repr::Rational(BigRational::new(num, den)))),
            FieldKind::PrimeField(p) => {
                let m = BigInt::from(p);
                let n = num.mod_floor(&m).to_u64().expect("residue fits");
                let d = den.mod_floor(&m).to_u64().expect("residue fits");
                Scalar::modular(n, p).checked_div(&Scalar::modular(d, p))
            }
        }
    }

    /// All elements in canonical residue order. Panics over ℚ.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let p = self.order().expect("elements() requires a finite field");
        (0..p).map(move |v| Scalar::modular(v, p))
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.field() == *self
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Self::rationals());
        }
        let p = t
            .strip_prefix("Fp:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| Error::InvalidFieldSpec(s.to_string()))?;
        Self::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo `m` by the extended Euclidean algorithm.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

impl Scalar {
    fn modular(value: u64, modulus: u64) -> Self {
        Scalar(Repr::Modular { value, modulus })
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Rational(_) => FieldSpec::rationals(),
            Repr::Modular { modulus, .. } => FieldSpec {
                kind: FieldKind::PrimeField(*modulus),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_zero(),
            Repr::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_one(),
            Repr::Modular { value, .. } => *value == 1,
        }
    }

    /// Canonical residue, `None` over ℚ.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Modular { value, .. } => Some(*value),
            Repr::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            Repr::Modular { .. } => None,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(r) => Scalar(Repr::Rational(r.recip())),
            Repr::Modular { value, modulus } => {
                Scalar::modular(mod_inv(*value, *modulus).expect("p is prime"), *modulus)
            }
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: u64) -> Scalar {
        match &self.0 {
            Repr::Rational(r) => {
                let e = i32::try_from(exp).expect("exponent fits in i32");
                Scalar(Repr::Rational(num_traits::pow::Pow::pow(r, e)))
            }
            Repr::Modular { value, modulus } => {
                Scalar::modular(mod_pow(*value, exp, *modulus), *modulus)
            }
        }
    }

    fn check_same(&self, rhs: &Scalar) {
        if self.field() != rhs.field() {
            panic!(
                "{}",
                Error::FieldMismatch(self.field().to_string(), rhs.field().to_string())
            );
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Rationals by value, residues by canonical representative.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (
                Repr::Modular { value: a, modulus: p },
                Repr::Modular { value: b, modulus: q },
            ) => (p, a).cmp(&(q, b)),
            (Repr::Rational(_), Repr::Modular { .. }) => Ordering::Less,
            (Repr::Modular { .. }, Repr::Rational(_)) => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a + b)),
            (Repr::Modular { value: a, modulus }, Repr::Modular { value: b, .. }) => {
                Scalar::modular((a + b) % modulus, *modulus)
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a - b)),
            (Repr::Modular { value: a, modulus }, Repr::Modular { value: b, .. }) => {
                Scalar::modular((a + modulus - b) % modulus, *modulus)
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Modular { value: a, modulus }, Repr::Modular { value: b, .. }) => {
                Scalar::modular(a * b % modulus, *modulus)
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Rational(a) => Scalar(Repr::Rational(-a)),
            Repr::Modular { value, modulus } => {
                Scalar::modular((modulus - value) % modulus, *modulus)
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Random element with small numerator/denominator over ℚ, uniform over F_p.
pub fn random_scalar<R: rand::Rng + ?Sized>(field: &FieldSpec, rng: &mut R, bound: i64) -> Scalar {
    match field.kind() {
        FieldKind::PrimeField(p) => field.from_u64(rng.random_range(0..p)),
        FieldKind::Rationals => {
            let num = rng.random_range(-bound..=bound);
            let den = if rng.random_bool(0.25) {
                rng.random_range(1..=bound.max(1))
            } else {
                1
            };
            field.from_ratio(num, den).expect("nonzero denominator")
        }
    }
}

pub fn random_nonzero<R: rand::Rng + ?Sized>(field: &FieldSpec, rng: &mut R, bound: i64) -> Scalar {
    loop {
        let s = random_scalar(field, rng, bound);
        if !s.is_zero() {
            return s;
        }
    }
}

impl Scalar {
    /// Numerator sign helper used by printers.
    pub fn is_negative(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Scalar {
        FieldSpec::rationals().from_ratio(a, b).unwrap()
    }

    #[test]
    fn field_make() {
        assert_eq!(FieldSpec::rationals().characteristic(), 0);
        assert_eq!(FieldSpec::prime(7).unwrap().characteristic(), 7);
        assert_eq!(FieldSpec::prime(6), Err(Error::CompositeModulus(6)));
        assert_eq!(FieldSpec::prime(1), Err(Error::CompositeModulus(1)));
        assert_eq!(FieldSpec::make(FieldKind::PrimeField(13)).unwrap().order(), Some(13));
    }

    #[test]
    fn spec_strings() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::rationals());
        assert_eq!("Fp:13".parse::<FieldSpec>().unwrap().to_string(), "Fp:13");
        assert!(matches!("Fp:12".parse::<FieldSpec>(), Err(Error::CompositeModulus(12))));
        assert!(matches!("R".parse::<FieldSpec>(), Err(Error::InvalidFieldSpec(_))));
    }

    #[test]
    fn rational_ops() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!((q(1, 2) + q(1, 3)).to_string(), "5/6");
        assert_eq!(q(-4, -8).to_string(), "1/2");
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!(q(0, 1).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn prime_field_inverse() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.from_i64(3).inv().unwrap(), f7.from_i64(5));
        assert_eq!(f7.from_i64(-1).residue(), Some(6));
        assert_eq!(f7.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn literals() {
        let f = FieldSpec::rationals();
        assert_eq!(f.parse_scalar("-3/4").unwrap(), q(-3, 4));
        assert_eq!(f.parse_scalar("12").unwrap(), q(12, 1));
        assert!(f.parse_scalar("x").is_err());
        assert_eq!(f.parse_scalar("1/0"), Err(Error::DivisionByZero));
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.parse_scalar("1/2").unwrap().residue(), Some(3));
        assert_eq!(f5.parse_scalar("-1").unwrap().residue(), Some(4));
    }

    #[test]
    fn fermat_small_primes() {
        for p in (2..=101).filter(|&p| is_prime(p)) {
            let f = FieldSpec::prime(p).unwrap();
            for x in f.elements() {
                assert_eq!(x.pow(p), x, "x^p != x for x = {x} in F_{p}");
            }
        }
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let _ = FieldSpec::rationals().one() + FieldSpec::prime(5).unwrap().one();
    }

    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::rationals()),
            Just(FieldSpec::prime(7).unwrap()),
            Just(FieldSpec::prime(101).unwrap()),
        ]
    }

    fn arb_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        (arb_field(), prop::array::uniform6(-50i64..50))
            .prop_filter("nonzero denominators", |(_, v)| v[1] != 0 && v[3] != 0 && v[5] != 0)
            .prop_filter_map("denominator vanishes mod p", |(f, v)| {
                Some((
                    f.from_ratio(v[0], v[1]).ok()?,
                    f.from_ratio(v[2], v[3]).ok()?,
                    f.from_ratio(v[4], v[5]).ok()?,
                ))
            })
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a - &a, a.field().zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn normalization_is_path_independent(a in -30i64..30, b in 1i64..30, k in 1i64..20) {
            let f = FieldSpec::rationals();
            let direct = f.from_ratio(a, b).unwrap();
            let scaled = f.from_ratio(a * k, b * k).unwrap();
            let roundabout = &f.from_ratio(a, b * k).unwrap() * &f.from_i64(k);
            prop_assert_eq!(&direct, &scaled);
            prop_assert_eq!(&direct, &roundabout);
            prop_assert_eq!(direct.to_string(), scaled.to_string());
        }
    }
}

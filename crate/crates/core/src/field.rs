//! Ground fields and their elements.
//!
//! Two families exist: the rationals (arbitrary precision) and prime fields
//! `F_p` with `p < 2^31`, so that products of residues fit in a `u64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible prime modulus.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    PrimeField { p: u64 },
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::InvalidInput(format!("{p} is not an admissible prime modulus")));
        }
        Ok(FieldSpec::PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField { p } => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField { p } => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_i64(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_i64(*self, 1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        Scalar::from_i64(*self, n)
    }

    /// Parses a scalar in this field ("3/7", "-2", "5").
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        Scalar::parse(*self, s)
    }

    /// All field elements, in increasing residue order; `None` over the rationals.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar> + '_> {
        let p = self.size()?;
        Some((0..p).map(move |v| Scalar::Mod { v, p }))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rationals"),
            FieldSpec::PrimeField { p } => write!(f, "q{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `rationals` and `q<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rationals" | "Q" | "q0" => Ok(FieldSpec::Rationals),
            _ => {
                let digits = s
                    .strip_prefix('q')
                    .or_else(|| s.strip_prefix("F"))
                    .ok_or_else(|| Error::InvalidInput(format!("unknown field `{s}`")))?;
                let p = digits
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidInput(format!("unknown field `{s}`")))?;
                FieldSpec::prime(p)
            }
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`FieldSpec`]. Residues always carry their modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { v: u64, p: u64 },
}

impl Scalar {
    pub fn from_i64(field: FieldSpec, n: i64) -> Scalar {
        match field {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField { p } => Scalar::Mod { v: reduce_i64(n, p), p },
        }
    }

    /// `num / den`; panics if `den` vanishes in the field.
    pub fn from_ratio(field: FieldSpec, num: i64, den: i64) -> Scalar {
        let d = Scalar::from_i64(field, den).inv().expect("zero denominator");
        Scalar::from_i64(field, num) * d
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod { p, .. } => FieldSpec::PrimeField { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { v, p } => Scalar::Mod { v: inv_mod(*v, *p), p: *p },
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("cannot parse scalar `{s}` over {field}"));
        match field {
            FieldSpec::Rationals => {
                let r = if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(s.parse().map_err(|_| bad())?)
                };
                Ok(Scalar::Rat(r))
            }
            FieldSpec::PrimeField { .. } => {
                if let Some((n, d)) = s.split_once('/') {
                    let n: i64 = n.trim().parse().map_err(|_| bad())?;
                    let d: i64 = d.trim().parse().map_err(|_| bad())?;
                    let d = Scalar::from_i64(field, d).inv().ok_or_else(bad)?;
                    Ok(Scalar::from_i64(field, n) * d)
                } else {
                    let n: i64 = s.parse().map_err(|_| bad())?;
                    Ok(Scalar::from_i64(field, n))
                }
            }
        }
    }

    /// Integer numerator/denominator view over the rationals.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { v, .. } => Some(*v),
            Scalar::Rat(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed-field scalar arithmetic: {} and {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => {
                Scalar::Mod { v: (a + b) % p, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => {
                Scalar::Mod { v: (a + p - b) % p, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => {
                Scalar::Mod { v: a * b % p, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { v, p } => Scalar::Mod { v: (p - v) % p, p: *p },
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

pub(crate) fn reduce_i64(n: i64, p: u64) -> u64 {
    let r = (n as i128).rem_euclid(p as i128);
    r as u64
}

pub(crate) fn inv_mod(v: u64, p: u64) -> u64 {
    // extended Euclid
    let (mut a, mut b) = (v as i128, p as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    while b != 0 {
        let q = a / b;
        (a, b) = (b, a - q * b);
        (x0, x1) = (x1, x0 - q * x1);
    }
    debug_assert_eq!(a, 1, "{v} not invertible mod {p}");
    x0.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse("6/14").unwrap().to_string(), "3/7");
        assert_eq!(q.parse("-4").unwrap().to_string(), "-4");
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.parse("-1").unwrap().to_string(), "6");
        assert_eq!(f7.parse("1/2").unwrap().to_string(), "4");
        assert!(FieldSpec::prime(9).is_err());
        assert_eq!("q5".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField { p: 5 });
        assert_eq!("rationals".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert!("q4".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn characteristic() {
        assert_eq!(FieldSpec::Rationals.characteristic(), 0);
        assert_eq!(FieldSpec::prime(11).unwrap().characteristic(), 11);
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn mixed_fields_panic() {
        let a = FieldSpec::Rationals.one();
        let b = FieldSpec::prime(3).unwrap().one();
        let _ = a + b;
    }

    fn arb_scalar() -> impl Strategy<Value = (FieldSpec, i64, i64, i64)> {
        (prop_oneof![Just(FieldSpec::Rationals), Just(FieldSpec::PrimeField { p: 7 }), Just(FieldSpec::PrimeField { p: 2 })],
         -50i64..50, -50i64..50, -50i64..50)
    }

    proptest! {
        #[test]
        fn field_axioms((f, a, b, c) in arb_scalar()) {
            let (a, b, c) = (f.int(a), f.int(b), f.int(c));
            prop_assert_eq!((&a + &b) + c.clone(), &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
            prop_assert_eq!(&a - &a, f.zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), f.one());
            }
        }
    }
}

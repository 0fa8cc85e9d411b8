//! Base fields: the rationals and prime fields of odd characteristic.
//!
//! The field is picked per curve at runtime, so elements are a small enum
//! rather than a type parameter. Prime-field elements carry their modulus;
//! mixing elements of different fields is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps every product of two residues inside `u64`.
pub const MAX_PRIME: u64 = (1 << 32) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// A prime field `F_p`. Rejects composite moduli, `p = 2` and moduli
    /// beyond [`MAX_PRIME`].
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if p > MAX_PRIME {
            return Err(Error::InvalidField(format!("modulus {p} exceeds {MAX_PRIME}")));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Q(BigRational::zero()),
            Field::Prime(p) => FieldElem::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElem::Fp { v: n.rem_euclid(p as i64) as u64, p },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldElem::Fp { v: r.to_u64().expect("reduced residue fits"), p }
            }
        }
    }

    /// Maps `num/den` into the field; fails when `den` vanishes in it.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<FieldElem> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::Contract(format!("denominator {den} vanishes in {self}")));
        }
        Ok(&self.from_bigint(num) / &d)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Parses an integer or `a/b` literal.
    pub fn parse_elem(self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        let bad = || Error::Contract(format!("not a field literal: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        self.from_ratio(&num, &den)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
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

/// An element of a [`Field`]. Rationals are kept in lowest terms with a
/// positive denominator (guaranteed by `BigRational`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Q(_) => Field::Rational,
            FieldElem::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_one(),
            FieldElem::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Q(r) => FieldElem::Q(r.recip()),
            FieldElem::Fp { v, p } => FieldElem::Fp { v: pow_mod(*v, p - 2, *p), p: *p },
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
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

    /// Exact square root in the base field, if one exists.
    pub fn sqrt(&self) -> Option<FieldElem> {
        match self {
            FieldElem::Q(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = exact_isqrt(r.numer())?;
                let d = exact_isqrt(r.denom())?;
                Some(FieldElem::Q(BigRational::new(n, d)))
            }
            FieldElem::Fp { v, p } => sqrt_mod(*v, *p).map(|v| FieldElem::Fp { v, p: *p }),
        }
    }

    /// The rational value, for `Q` elements.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Q(r) => Some(r),
            FieldElem::Fp { .. } => None,
        }
    }

    fn check_same(&self, other: &FieldElem) {
        assert_eq!(self.field(), other.field(), "mixed-field arithmetic");
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Tonelli–Shanks over `F_p`; returns the root in `[0, p/2]` when possible.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r.min(p - r))
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => a.cmp(b),
            (FieldElem::Fp { v: a, p: pa }, FieldElem::Fp { v: b, p: pb }) => (pa, a).cmp(&(pb, b)),
            (FieldElem::Q(_), FieldElem::Fp { .. }) => Ordering::Less,
            (FieldElem::Fp { .. }, FieldElem::Q(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.check_same(rhs);
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, .. }) => {
                FieldElem::Fp { v: (a + b) % p, p: *p }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.check_same(rhs);
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a - b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, .. }) => {
                FieldElem::Fp { v: (a + p - b) % p, p: *p }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.check_same(rhs);
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, .. }) => {
                FieldElem::Fp { v: a * b % p, p: *p }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { v, p } => FieldElem::Fp { v: (p - v) % p, p: *p },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_validation() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1009).is_ok());
    }

    #[test]
    fn fp_sqrt_roundtrip() {
        let f = Field::prime(1009).unwrap();
        for n in 0..1009 {
            let a = f.from_i64(n);
            if let Some(r) = a.sqrt() {
                assert_eq!(&r * &r, a);
            }
        }
        assert!(f.from_i64(-1).sqrt().is_some());
        assert!(Field::prime(1019).unwrap().from_i64(-1).sqrt().is_none());
    }

    #[test]
    fn rational_sqrt() {
        let q = Field::Rational;
        assert_eq!(q.parse_elem("9/4").unwrap().sqrt(), Some(q.parse_elem("3/2").unwrap()));
        assert_eq!(q.from_i64(33).sqrt(), None);
        assert_eq!(q.from_i64(-1).sqrt(), None);
    }

    proptest! {
        #[test]
        fn rational_sum_is_lowest_terms(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let q = Field::Rational;
            let x = q.from_ratio(&a.into(), &b.into()).unwrap();
            let y = q.from_ratio(&c.into(), &d.into()).unwrap();
            let s = &x + &y;
            let r = s.as_rational().unwrap();
            prop_assert!(r.denom() > &BigInt::zero());
            prop_assert!(r.numer().gcd(r.denom()).is_one());
            // a/b + c/d = (ad + cb)/bd
            let expect = BigRational::new(BigInt::from(a * d + c * b), BigInt::from(b * d));
            prop_assert_eq!(r, &expect);
        }

        #[test]
        fn fp_inverse(v in 1u64..1009) {
            let f = Field::prime(1009).unwrap();
            let a = f.from_i64(v as i64);
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }
}

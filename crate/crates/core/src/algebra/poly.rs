//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored in ascending degree order with no trailing zeros;
//! the zero polynomial has an empty coefficient vector and degree `None`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn constant(c: FieldElem) -> Poly {
        let field = c.field();
        Poly::new(field, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: FieldElem, k: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Poly::new(field, coeffs)
    }

    pub fn new(field: Field, coeffs: Vec<FieldElem>) -> Poly {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FieldElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElem> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lc(&self) -> FieldElem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(FieldElem::is_one)
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field, coeffs }
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        Poly::new(self.field, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lc_inv = d.lc().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &(&c * dc);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).xgcd(m);
        g.is_one().then(|| s.rem(m))
    }

    /// `self^e mod m` for a possibly large exponent given as little-endian bits.
    pub fn pow_mod_bits(&self, bits: &[bool], m: &Poly) -> Poly {
        let mut acc = Poly::one(self.field).rem(m);
        for &bit in bits.iter().rev() {
            acc = (&acc * &acc).rem(m);
            if bit {
                acc = (&acc * self).rem(m);
            }
        }
        acc
    }

    pub fn pow_mod(&self, e: u64, m: &Poly) -> Poly {
        let bits: Vec<bool> = (0..64).map(|i| (e >> i) & 1 == 1).collect();
        self.pow_mod_bits(&bits, m)
    }

    /// Order of `p` in `self`, i.e. the largest `k` with `p^k | self`.
    pub fn multiplicity_of(&self, p: &Poly) -> u32 {
        assert!(!self.is_zero());
        let mut k = 0;
        let mut q = self.clone();
        while let Some(next) = q.div_exact(p) {
            q = next;
            k += 1;
        }
        k
    }

    /// Renders the polynomial in the variable `var` (used for residue-field
    /// elements and tails as well as plain polynomials in `x`).
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = signed_parts(c);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

/// Sign and magnitude text of a coefficient. Prime-field elements are always
/// printed as nonnegative representatives.
pub(crate) fn signed_parts(c: &FieldElem) -> (bool, String) {
    match c {
        FieldElem::Q(r) if r < &num_rational::BigRational::from_integer(0.into()) => {
            (true, (-c).to_string())
        }
        _ => (false, c.to_string()),
    }
}

pub fn is_squarefree(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Contract("squarefree test on the zero polynomial".into()));
    }
    Ok(f.gcd(&f.derivative()).is_constant())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

/// Degree first, then coefficients in ascending order.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

//! Divisors: finite formal sums of places with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::curve::Place;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn place(p: Place, n: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_place(p, n);
        d
    }

    pub fn from_terms<I: IntoIterator<Item = (Place, i64)>>(terms: I) -> Divisor {
        let mut d = Divisor::zero();
        for (p, n) in terms {
            d.add_place(p, n);
        }
        d
    }

    pub fn add_place(&mut self, p: Place, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    /// Terms in place order; coefficients are nonzero.
    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }

    pub fn support(&self) -> Vec<Place> {
        self.terms.keys().cloned().collect()
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, &n)| n * p.degree() as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.terms.iter().map(|(p, &n)| (p.clone(), n * k)))
    }

    pub fn positive_part(&self) -> Divisor {
        Divisor::from_terms(self.terms.iter().filter(|(_, &n)| n > 0).map(|(p, &n)| (p.clone(), n)))
    }

    pub fn negative_part(&self) -> Divisor {
        Divisor::from_terms(self.terms.iter().filter(|(_, &n)| n < 0).map(|(p, &n)| (p.clone(), -n)))
    }

    /// Coefficientwise maximum.
    pub fn max(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, n) in other.terms() {
            let m = self.coeff(p);
            if n > m {
                out.add_place(p.clone(), n - m);
            }
        }
        for (p, m) in self.terms() {
            if m < 0 && other.coeff(p) == 0 {
                out.add_place(p.clone(), -m);
            }
        }
        out
    }

    /// `self >= other` coefficientwise.
    pub fn dominates(&self, other: &Divisor) -> bool {
        (self - other).terms.values().all(|&n| n >= 0)
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, n) in rhs.terms() {
            out.add_place(p.clone(), n);
        }
        out
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &(-rhs)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        self.scale(-1)
    }
}

impl Add for Divisor {
    type Output = Divisor;
    fn add(self, rhs: Divisor) -> Divisor {
        &self + &rhs
    }
}

impl Sub for Divisor {
    type Output = Divisor;
    fn sub(self, rhs: Divisor) -> Divisor {
        &self - &rhs
    }
}

impl Neg for Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        -&self
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, n)) in self.terms().enumerate() {
            let sign = match (i, n < 0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let k = n.abs();
            if k == 1 {
                write!(f, "{sign}{p}")?;
            } else {
                write!(f, "{sign}{k}*{p}")?;
            }
        }
        Ok(())
    }
}

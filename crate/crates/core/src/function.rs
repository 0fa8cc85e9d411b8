//! Elements `(a(x) + b(x) y) / c(x)` of the function field, and their divisors.

use std::fmt;

use crate::algebra::factor::factor;
use crate::algebra::{FieldElem, Poly};
use crate::curve::{Branch, HyperellipticCurve, Place};
use crate::divisor::Divisor;
use crate::error::{Error, Result};

/// Stored normalized: `gcd(a, b, c) = 1` and `c` monic, so equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionElement {
    a: Poly,
    b: Poly,
    c: Poly,
}

impl FunctionElement {
    pub fn new(a: Poly, b: Poly, c: Poly) -> Result<FunctionElement> {
        if c.is_zero() {
            return Err(Error::Contract("zero denominator".into()));
        }
        if a.field() != b.field() || a.field() != c.field() {
            return Err(Error::Contract("mixed base fields".into()));
        }
        Ok(FunctionElement::normalized(a, b, c))
    }

    fn normalized(a: Poly, b: Poly, c: Poly) -> FunctionElement {
        let field = c.field();
        if a.is_zero() && b.is_zero() {
            return FunctionElement { a, b, c: Poly::one(field) };
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = if g.is_one() {
            (a, b, c)
        } else {
            (a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap(), c.div_exact(&g).unwrap())
        };
        if !c.is_monic() {
            let k = c.lc().inv().unwrap();
            a = a.scale(&k);
            b = b.scale(&k);
            c = c.scale(&k);
        }
        FunctionElement { a, b, c }
    }

    pub fn from_poly(a: Poly) -> FunctionElement {
        let field = a.field();
        FunctionElement { a, b: Poly::zero(field), c: Poly::one(field) }
    }

    pub fn constant(k: FieldElem) -> FunctionElement {
        FunctionElement::from_poly(Poly::constant(k))
    }

    pub fn x(curve: &HyperellipticCurve) -> FunctionElement {
        FunctionElement::from_poly(Poly::x(curve.field()))
    }

    pub fn y(curve: &HyperellipticCurve) -> FunctionElement {
        let field = curve.field();
        FunctionElement { a: Poly::zero(field), b: Poly::one(field), c: Poly::one(field) }
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn c(&self) -> &Poly {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &FunctionElement) -> FunctionElement {
        FunctionElement::normalized(
            &(&self.a * &o.c) + &(&o.a * &self.c),
            &(&self.b * &o.c) + &(&o.b * &self.c),
            &self.c * &o.c,
        )
    }

    pub fn neg(&self) -> FunctionElement {
        FunctionElement { a: -&self.a, b: -&self.b, c: self.c.clone() }
    }

    pub fn sub(&self, o: &FunctionElement) -> FunctionElement {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &FieldElem) -> FunctionElement {
        FunctionElement::normalized(self.a.scale(k), self.b.scale(k), self.c.clone())
    }

    pub fn mul(&self, o: &FunctionElement, curve: &HyperellipticCurve) -> FunctionElement {
        let f = curve.f();
        FunctionElement::normalized(
            &(&self.a * &o.a) + &(&(&self.b * &o.b) * f),
            &(&self.a * &o.b) + &(&self.b * &o.a),
            &self.c * &o.c,
        )
    }

    /// `c (a - b y) / (a^2 - b^2 f)`; `None` for zero.
    pub fn inv(&self, curve: &HyperellipticCurve) -> Option<FunctionElement> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_numerator(curve);
        Some(FunctionElement::normalized(&self.a * &self.c, -&(&self.b * &self.c), n))
    }

    pub fn div(&self, o: &FunctionElement, curve: &HyperellipticCurve) -> Option<FunctionElement> {
        Some(self.mul(&o.inv(curve)?, curve))
    }

    /// `a^2 - b^2 f`, the norm of the numerator down to the x-line.
    pub fn norm_numerator(&self, curve: &HyperellipticCurve) -> Poly {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * curve.f())
    }
}

impl fmt::Display for FunctionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if s.contains(' ') {
                format!("({s})")
            } else {
                s
            }
        };
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => self.a.to_string(),
            (_, false) => {
                let by = if self.b.is_one() { "y".to_string() } else { format!("{}*y", wrap(&self.b)) };
                if self.a.is_zero() {
                    by
                } else {
                    format!("{} + {by}", self.a)
                }
            }
        };
        if self.c.is_one() {
            write!(f, "{num}")
        } else {
            let num = if num.contains(' ') || num.contains('*') { format!("({num})") } else { num };
            write!(f, "{num}/{}", wrap(&self.c))
        }
    }
}

impl HyperellipticCurve {
    /// Order of vanishing of a nonzero `h` at a place, from closed formulas.
    pub fn valuation(&self, h: &FunctionElement, place: &Place) -> Result<i64> {
        if h.is_zero() {
            return Err(Error::Contract("valuation of the zero function".into()));
        }
        match place {
            Place::Infinity => Ok(self.valuation_at_infinity(h)),
            Place::Finite { p, branch } => {
                let e = place.ramification();
                let ord = |q: &Poly| i64::from(q.multiplicity_of(p));
                let g = h.a.gcd(&h.b);
                let a1 = h.a.div_exact(&g).unwrap();
                let b1 = h.b.div_exact(&g).unwrap();
                let core = match branch {
                    Branch::Ramified => ord(&norm(&a1, &b1, self.f())),
                    Branch::Split(beta) => {
                        if (&a1 + &(&b1 * beta)).rem(p).is_zero() {
                            ord(&norm(&a1, &b1, self.f()))
                        } else {
                            0
                        }
                    }
                    Branch::Inert => 0,
                };
                Ok(e * (ord(&g) - ord(&h.c)) + core)
            }
        }
    }

    fn valuation_at_infinity(&self, h: &FunctionElement) -> i64 {
        let d = 2 * self.genus() as i64 + 1;
        let va = if h.a.is_zero() { i64::MIN } else { 2 * h.a.deg_i64() };
        let vb = if h.b.is_zero() { i64::MIN } else { 2 * h.b.deg_i64() + d };
        2 * h.c.deg_i64() - va.max(vb)
    }

    /// The pullback of the closed point `p = 0` of the x-line.
    pub fn pullback(&self, p: &Poly) -> Divisor {
        Divisor::from_terms(self.places_above_irreducible(p).into_iter().map(|pl| {
            let e = pl.ramification();
            (pl, e)
        }))
    }

    pub fn pullback_poly(&self, q: &Poly) -> Divisor {
        let mut d = Divisor::zero();
        for (p, e) in factor(q) {
            d = &d + &self.pullback(&p).scale(i64::from(e));
        }
        d
    }

    /// Principal divisor of a nonzero function.
    pub fn divisor_of(&self, h: &FunctionElement) -> Result<Divisor> {
        if h.is_zero() {
            return Err(Error::Contract("divisor of the zero function".into()));
        }
        let g = h.a.gcd(&h.b);
        let a1 = h.a.div_exact(&g).unwrap();
        let b1 = h.b.div_exact(&g).unwrap();
        let mut d = &self.pullback_poly(&g) - &self.pullback_poly(&h.c);
        for (p, e) in factor(&norm(&a1, &b1, self.f())) {
            let branch = if self.f().rem(&p).is_zero() {
                Branch::Ramified
            } else {
                let b_inv = b1.inv_mod(&p).expect("b coprime to p on the norm");
                Branch::Split((&(-&a1) * &b_inv).rem(&p))
            };
            d.add_place(Place::Finite { p, branch }, i64::from(e));
        }
        d.add_place(Place::Infinity, self.valuation_at_infinity(h));
        Ok(d)
    }

    /// Divisor of `dx / y`.
    pub fn canonical_divisor(&self) -> Divisor {
        let mut div_dx = Divisor::place(Place::Infinity, -3);
        for p in self.branch_polys() {
            div_dx.add_place(Place::Finite { p: p.clone(), branch: Branch::Ramified }, 1);
        }
        let div_y = self.divisor_of(&FunctionElement::y(self)).unwrap();
        &div_dx - &div_y
    }
}

fn norm(a: &Poly, b: &Poly, f: &Poly) -> Poly {
    &(a * a) - &(&(b * b) * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn g2() -> HyperellipticCurve {
        HyperellipticCurve::new(Poly::from_i64s(Q, &[1, 0, 0, 0, 0, 1])).unwrap()
    }

    fn g3() -> HyperellipticCurve {
        HyperellipticCurve::new(Poly::from_i64s(Q, &[1, 1, 0, 0, 0, 0, 0, 1])).unwrap()
    }

    fn pt(c: &HyperellipticCurve, x: i64, y: i64) -> Place {
        c.point(&Q.from_i64(x), &Q.from_i64(y)).unwrap()
    }

    #[test]
    fn normalization_is_canonical() {
        let p = |v: &[i64]| Poly::from_i64s(Q, v);
        let h1 = FunctionElement::new(p(&[2, 2]), p(&[0, 2]), p(&[4, 4])).unwrap();
        let h2 = FunctionElement::new(p(&[1]), p(&[0, 1]), p(&[2])).unwrap();
        assert_ne!(h1, h2);
        let h3 = FunctionElement::new(p(&[1, 1]), p(&[0, 1]), p(&[2, 2])).unwrap();
        assert_eq!(h1, h3);
        assert!(h1.c().is_monic());
        assert!(FunctionElement::new(p(&[1]), p(&[]), p(&[])).is_err());
    }

    #[test]
    fn basic_valuations() {
        let c = g2();
        let x = FunctionElement::x(&c);
        let y = FunctionElement::y(&c);
        assert_eq!(c.valuation(&x, &Place::Infinity).unwrap(), -2);
        assert_eq!(c.valuation(&y, &Place::Infinity).unwrap(), -5);
        assert_eq!(c.valuation(&x, &pt(&c, 0, 1)).unwrap(), 1);
        assert_eq!(c.valuation(&y, &pt(&c, 0, 1)).unwrap(), 0);
        assert_eq!(c.valuation(&y, &pt(&c, -1, 0)).unwrap(), 1);
        let xp1 = FunctionElement::from_poly(Poly::from_i64s(Q, &[1, 1]));
        assert_eq!(c.valuation(&xp1, &pt(&c, -1, 0)).unwrap(), 2);
        // y - 1 vanishes to order 5 at (0,1), not at all at (0,-1)
        let ym1 = y.sub(&FunctionElement::constant(Q.one()));
        assert_eq!(c.valuation(&ym1, &pt(&c, 0, 1)).unwrap(), 5);
        assert_eq!(c.valuation(&ym1, &pt(&c, 0, -1)).unwrap(), 0);
        assert!(c.valuation(&FunctionElement::constant(Q.zero()), &Place::Infinity).is_err());
    }

    #[test]
    fn divisor_of_y() {
        let c = g2();
        let d = c.divisor_of(&FunctionElement::y(&c)).unwrap();
        let quartic = Poly::from_i64s(Q, &[1, -1, 1, -1, 1]);
        let expected = Divisor::from_terms([
            (pt(&c, -1, 0), 1),
            (Place::Finite { p: quartic, branch: Branch::Ramified }, 1),
            (Place::Infinity, -5),
        ]);
        assert_eq!(d, expected);
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn canonical_divisor_is_multiple_of_infinity() {
        assert_eq!(g2().canonical_divisor(), Divisor::place(Place::Infinity, 2));
        assert_eq!(g3().canonical_divisor(), Divisor::place(Place::Infinity, 4));
        let fp = HyperellipticCurve::new(Poly::from_i64s(Field::Prime(1009), &[1, 1, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(fp.canonical_divisor(), Divisor::place(Place::Infinity, 4));
    }

    fn random_function(c: &HyperellipticCurve, rng: &mut ChaCha8Rng) -> FunctionElement {
        let field = c.field();
        let mut rp = |max_deg: usize| {
            let d = rng.gen_range(0..=max_deg);
            Poly::new(field, (0..=d).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect())
        };
        loop {
            let (a, b, den) = (rp(4), rp(2), rp(3));
            if !den.is_zero() && !(a.is_zero() && b.is_zero()) {
                return FunctionElement::new(a, b, den).unwrap();
            }
        }
    }

    fn check_principal(c: &HyperellipticCurve, seed: u64, cases: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cases {
            let h = random_function(c, &mut rng);
            let d = c.divisor_of(&h).unwrap();
            assert_eq!(d.degree(), 0, "deg div({h}) = {}", d.degree());
            for (pl, n) in d.terms() {
                c.validate_place(pl).unwrap();
                assert_eq!(c.valuation(&h, pl).unwrap(), n, "v_{pl}({h})");
            }
            let k = random_function(c, &mut rng);
            let prod = c.divisor_of(&h.mul(&k, c)).unwrap();
            assert_eq!(prod, &d + &c.divisor_of(&k).unwrap());
            let inv = c.divisor_of(&h.inv(c).unwrap()).unwrap();
            assert_eq!(inv, -&d);
        }
    }

    #[test]
    fn principal_divisors_over_q() {
        check_principal(&g2(), 1, 100);
        check_principal(&g3(), 2, 40);
    }

    #[test]
    fn principal_divisors_over_fp() {
        let c = HyperellipticCurve::new(Poly::from_i64s(Field::Prime(1009), &[1, 1, 0, 0, 0, 0, 0, 1])).unwrap();
        check_principal(&c, 3, 100);
    }

    #[test]
    fn field_operations() {
        let c = g2();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let h = random_function(&c, &mut rng);
            let k = random_function(&c, &mut rng);
            let one = FunctionElement::constant(Q.one());
            assert_eq!(h.mul(&h.inv(&c).unwrap(), &c), one);
            assert_eq!(h.add(&k).sub(&k), h);
            assert_eq!(h.mul(&k, &c), k.mul(&h, &c));
        }
    }

    #[test]
    fn display() {
        let c = g2();
        let p = |v: &[i64]| Poly::from_i64s(Q, v);
        assert_eq!(FunctionElement::y(&c).to_string(), "y");
        assert_eq!(FunctionElement::new(p(&[1]), p(&[]), p(&[0, 1])).unwrap().to_string(), "1/x");
        assert_eq!(
            FunctionElement::new(p(&[1]), p(&[0, 1]), p(&[1, 1])).unwrap().to_string(),
            "(1 + x*y)/(x + 1)"
        );
    }
}

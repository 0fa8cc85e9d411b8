//! Riemann–Roch spaces `L(D) = { h : div(h) + D >= 0 }`.
//!
//! Every `h` in `L(D)` is written `(a + b y) / c` with a fixed denominator
//! `c` built from the positive part of `D` over the x-line. The pole bound at
//! infinity caps the degrees of `a` and `b`; the remaining conditions are
//! vanishing conditions on Laurent coefficients of `a + b y` at finitely many
//! places.

use std::collections::BTreeMap;

use crate::algebra::{FieldElem, Matrix, Poly};
use crate::curve::{HyperellipticCurve, Place};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function::FunctionElement;
use crate::local::{Local, Parametrization, Series};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RRSpace {
    pub divisor: Divisor,
    pub basis: Vec<FunctionElement>,
}

impl RRSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum coeffs[i] * basis[i]`.
    pub fn combine(&self, coeffs: &[FieldElem], curve: &HyperellipticCurve) -> FunctionElement {
        let mut acc = FunctionElement::constant(curve.field().zero());
        for (c, h) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&h.scale(c));
            }
        }
        acc
    }
}

/// `L(D)` as `(a + b y) / c` for a fixed `c`: `a` has `na` coefficients, `b`
/// has `nb`, and `kernel` spans the admissible coefficient vectors.
pub(crate) struct Ansatz {
    pub c: Poly,
    pub na: usize,
    pub nb: usize,
    pub kernel: Vec<Vec<FieldElem>>,
}

impl Ansatz {
    pub fn function(&self, v: &[FieldElem]) -> FunctionElement {
        let field = self.c.field();
        let a = Poly::new(field, v[..self.na].to_vec());
        let b = Poly::new(field, v[self.na..].to_vec());
        FunctionElement::new(a, b, self.c.clone()).unwrap()
    }
}

pub(crate) fn ansatz(curve: &HyperellipticCurve, d: &Divisor) -> Result<Ansatz> {
    let field = curve.field();
    let genus = curve.genus() as i64;
    let mut by_p: BTreeMap<Poly, Vec<(Place, i64)>> = BTreeMap::new();
    for (pl, n) in d.terms() {
        curve.validate_place(pl)?;
        if let Some(p) = pl.minpoly() {
            by_p.entry(p.clone()).or_default().push((pl.clone(), n));
        }
    }

    let mut c = Poly::one(field);
    let mut exponents = BTreeMap::new();
    for (p, places) in &by_p {
        let k = places.iter().map(|(pl, n)| (n.max(&0) + pl.ramification() - 1) / pl.ramification()).max().unwrap_or(0);
        exponents.insert(p.clone(), k);
        c = &c * &p.pow(k as u32);
    }

    let bound = d.coeff(&Place::Infinity) + 2 * c.deg_i64();
    if bound < 0 {
        return Ok(Ansatz { c, na: 0, nb: 0, kernel: Vec::new() });
    }
    let na = (bound / 2 + 1) as usize;
    let nb = if bound >= 2 * genus + 1 { ((bound - 2 * genus - 1) / 2 + 1) as usize } else { 0 };
    let ncols = na + nb;

    let mut m = Matrix::zeros(field, 0, ncols);
    for (p, k) in &exponents {
        for q in curve.places_above_irreducible(p) {
            let r = q.ramification() * k - d.coeff(&q);
            if r > 0 {
                for row in vanishing_rows(curve, &q, r, na, nb) {
                    m.push_row(row);
                }
            }
        }
    }
    Ok(Ansatz { c, na, nb, kernel: m.kernel() })
}

pub fn rr_basis(curve: &HyperellipticCurve, d: &Divisor) -> Result<RRSpace> {
    let a = ansatz(curve, d)?;
    let basis = a.kernel.iter().map(|v| a.function(v)).collect();
    Ok(RRSpace { divisor: d.clone(), basis })
}

/// Rows of the coefficients at orders `lo..=hi` at `q` of `x^i / c`
/// (`i < na`) and `x^j y / c` (`j < nb`), one row per order and residue
/// coordinate.
pub(crate) fn laurent_rows(
    curve: &HyperellipticCurve,
    q: &Place,
    c: &Poly,
    na: usize,
    nb: usize,
    lo: i64,
    hi: i64,
) -> Result<Vec<Vec<FieldElem>>> {
    if hi < lo {
        return Ok(Vec::new());
    }
    let mut n = match q.minpoly() {
        // x is a unit here; only the pole of 1/c costs precision
        Some(p) => hi + 2 + 2 * q.ramification() * c.multiplicity_of(p) as i64,
        None => hi + 2 * (na.max(nb) as i64) + 2 * curve.genus() as i64 + 4,
    }
    .max(4);
    loop {
        let param = Parametrization::new(curve, q, n as usize);
        let l = param.local();
        let den = l.poly_at(c, &param.x);
        if let Some(inv_c) = l.inv(&den, n) {
            // numerators are needed up to order hi - val(1/c); later
            // multiplications by x and y can lower the known order
            let top = hi + 1 - inv_c.val;
            let npow = na.max(nb) as i64;
            let keep = top - param.x.val.min(0) * npow - param.y.val.min(0);
            let mut columns: Vec<Series> = Vec::with_capacity(na + nb);
            let mut xp = l.monomial(0);
            let mut powers = Vec::with_capacity(na.max(nb));
            for _ in 0..npow {
                powers.push(xp.clone());
                xp = l.truncate(l.mul(&xp, &param.x), keep);
            }
            for p in &powers[..na] {
                columns.push(l.truncate(l.mul(p, &inv_c), hi + 1));
            }
            for p in &powers[..nb] {
                let py = l.truncate(l.mul(p, &param.y), top);
                columns.push(l.truncate(l.mul(&py, &inv_c), hi + 1));
            }
            if columns.iter().all(|s| s.prec > hi) {
                return Ok(coefficient_rows(&l, &columns, lo, hi));
            }
        }
        if n > crate::local::MAX_PRECISION {
            return Err(Error::Contract(format!("expansions at {q} did not reach order {hi}")));
        }
        n *= 2;
    }
}

/// Base-field rows expressing that the coefficients of `s^0 .. s^(r-1)` of
/// `sum a_i x^i + sum b_j x^j y` vanish at `q`.
fn vanishing_rows(
    curve: &HyperellipticCurve,
    q: &Place,
    r: i64,
    na: usize,
    nb: usize,
) -> Vec<Vec<FieldElem>> {
    let param = Parametrization::new(curve, q, r as usize);
    let l = param.local();
    let mut columns: Vec<Series> = Vec::with_capacity(na + nb);
    let mut xp = l.monomial(0);
    let mut powers = Vec::with_capacity(na.max(nb));
    for _ in 0..na.max(nb) {
        powers.push(xp.clone());
        xp = l.truncate(l.mul(&xp, &param.x), r);
    }
    columns.extend(powers[..na].iter().cloned());
    for p in &powers[..nb] {
        columns.push(l.truncate(l.mul(p, &param.y), r));
    }
    coefficient_rows(&l, &columns, 0, r - 1)
}

/// Rows (one per order and residue coordinate) of the coefficients of each
/// column series at orders `lo..=hi`.
pub(crate) fn coefficient_rows(l: &Local, columns: &[Series], lo: i64, hi: i64) -> Vec<Vec<FieldElem>> {
    let deg = l.rf.degree();
    let mut rows = Vec::new();
    for k in lo..=hi {
        let coords: Vec<Vec<FieldElem>> =
            columns.iter().map(|s| l.rf.coords(&s.coeff(k, l.rf).expect("precision"))).collect();
        for i in 0..deg {
            rows.push(coords.iter().map(|c| c[i].clone()).collect());
        }
    }
    rows
}

pub fn h0(curve: &HyperellipticCurve, d: &Divisor) -> Result<usize> {
    Ok(rr_basis(curve, d)?.dim())
}

/// `K - D`, whose `h0` is `h1(D)`.
pub fn serre_dual(curve: &HyperellipticCurve, d: &Divisor) -> Divisor {
    &curve.canonical_divisor() - d
}

/// `h1(D) = h0(K - D)`.
pub fn h1(curve: &HyperellipticCurve, d: &Divisor) -> Result<usize> {
    h0(curve, &serre_dual(curve, d))
}

/// `Some(h)` with `div(h) = D2 - D1` when `D1 ~ D2`.
pub fn is_linearly_equivalent(
    curve: &HyperellipticCurve,
    d1: &Divisor,
    d2: &Divisor,
) -> Result<Option<FunctionElement>> {
    if d1.degree() != d2.degree() {
        return Ok(None);
    }
    let space = rr_basis(curve, &(d1 - d2))?;
    let Some(h) = space.basis.into_iter().next() else { return Ok(None) };
    let div = curve.divisor_of(&h)?;
    if div != d2 - d1 {
        return Err(Error::Contract(format!("witness {h} has divisor {div}, expected {}", d2 - d1)));
    }
    Ok(Some(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    const Q: Field = Field::Rational;

    fn g2() -> HyperellipticCurve {
        HyperellipticCurve::new(Poly::from_i64s(Q, &[1, 0, 0, 0, 0, 1])).unwrap()
    }

    fn pt(c: &HyperellipticCurve, x: i64, y: i64) -> Place {
        c.point(&c.field().from_i64(x), &c.field().from_i64(y)).unwrap()
    }

    fn inf(n: i64) -> Divisor {
        Divisor::place(Place::Infinity, n)
    }

    fn names(s: &RRSpace) -> Vec<String> {
        s.basis.iter().map(|h| h.to_string()).collect()
    }

    #[test]
    fn spec_examples_genus_two() {
        let c = g2();
        assert_eq!(names(&rr_basis(&c, &Divisor::zero()).unwrap()), ["1"]);
        assert_eq!(names(&rr_basis(&c, &inf(2)).unwrap()), ["1", "x"]);
        let d = Divisor::from_terms([(pt(&c, 0, 1), 1), (pt(&c, 0, -1), 1)]);
        assert_eq!(names(&rr_basis(&c, &d).unwrap()), ["1/x", "1"]);
        assert!(rr_basis(&c, &inf(-1)).unwrap().basis.is_empty());
    }

    #[test]
    fn dimensions_from_the_construction() {
        let c = g2();
        let p = pt(&c, 0, 1);
        let dr = Divisor::place(pt(&c, 0, -1), 1);
        assert_eq!(h1(&c, &dr).unwrap(), 1);
        assert_eq!(h0(&c, &dr).unwrap(), 1);
        assert_eq!(h0(&c, &(&dr + &Divisor::place(p, 1))).unwrap(), 2);
        assert_eq!(h1(&c, &inf(3)).unwrap(), 0);
        // L(P + 2(0,-1)) = span{1, 1/x}
        let d = Divisor::from_terms([(pt(&c, 0, 1), 1), (pt(&c, 0, -1), 2)]);
        assert_eq!(names(&rr_basis(&c, &d).unwrap()), ["1/x", "1"]);
        assert_eq!(h0(&c, &Divisor::place(pt(&c, 0, -1), 2)).unwrap(), 1);
    }

    #[test]
    fn weierstrass_point() {
        let c = g2();
        let w = pt(&c, -1, 0);
        assert_eq!(h0(&c, &Divisor::place(w.clone(), 2)).unwrap(), 2);
        assert_eq!(names(&rr_basis(&c, &Divisor::place(w, 2)).unwrap()), ["1/(x + 1)", "x/(x + 1)"]);
    }

    #[test]
    fn linear_equivalence_examples() {
        let c = g2();
        let d = Divisor::from_terms([(pt(&c, 0, 1), 1), (pt(&c, 0, -1), 1)]);
        let h = is_linearly_equivalent(&c, &inf(2), &d).unwrap().unwrap();
        assert_eq!(h.to_string(), "x");
        assert!(is_linearly_equivalent(&c, &inf(1), &Divisor::place(pt(&c, 0, 1), 1)).unwrap().is_none());
        let h = is_linearly_equivalent(&c, &d, &d).unwrap().unwrap();
        assert_eq!(h.to_string(), "1");
    }

    #[test]
    fn higher_degree_places() {
        let c = g2();
        let quartic = c.places_above(&Poly::from_i64s(Q, &[1, -1, 1, -1, 1])).unwrap().remove(0);
        let inert = c.places_above_point(&Q.from_i64(2)).remove(0);
        for d in [
            Divisor::place(quartic.clone(), 1),
            Divisor::from_terms([(quartic.clone(), 1), (Place::Infinity, -3)]),
            Divisor::place(inert.clone(), 1),
            Divisor::from_terms([(inert.clone(), 2), (pt(&c, 0, 1), -1)]),
        ] {
            let space = rr_basis(&c, &d).unwrap();
            for h in &space.basis {
                assert!((&c.divisor_of(h).unwrap() + &d).is_effective() || (&c.divisor_of(h).unwrap() + &d).is_zero());
            }
            let h1 = h1(&c, &d).unwrap();
            assert_eq!(space.dim() as i64 - h1 as i64, d.degree() + 1 - 2, "{d}");
        }
        // (x+1) y vanishes on the whole ramification locus
        let y = FunctionElement::y(&c);
        let d = c.divisor_of(&y).unwrap();
        assert!(is_linearly_equivalent(&c, &Divisor::zero(), &d).unwrap().is_some());
    }
}

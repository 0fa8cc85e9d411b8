//! Classes in `H^1(O(D))` as principal parts modulo `O(D)` and global
//! functions.
//!
//! A class is a finite system of Laurent tails `sum c_k t^k` at places, kept
//! only at orders `k < -n_Q` (lower orders are local sections of `O(D)`).
//! It vanishes iff some global `h` has exactly these tails and is a section
//! of `O(D)` everywhere else.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{solve_linear, FieldElem, Matrix};
use crate::curve::{HyperellipticCurve, Place};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function::FunctionElement;
use crate::riemann_roch::{ansatz, h1, laurent_rows, Ansatz};

/// Tails at one place: order to nonzero base-field coefficient.
pub type Tail = BTreeMap<i64, FieldElem>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct H1Class {
    ambient: Divisor,
    tails: BTreeMap<Place, Tail>,
}

impl H1Class {
    pub fn zero(ambient: Divisor) -> H1Class {
        H1Class { ambient, tails: BTreeMap::new() }
    }

    /// Builds a class from `(place, order, coefficient)` terms, summing
    /// repeats and dropping terms that `O(ambient)` already permits.
    pub fn new<I>(ambient: Divisor, terms: I) -> H1Class
    where
        I: IntoIterator<Item = (Place, i64, FieldElem)>,
    {
        let mut tails: BTreeMap<Place, Tail> = BTreeMap::new();
        for (pl, k, c) in terms {
            let tail = tails.entry(pl).or_default();
            let sum = match tail.get(&k) {
                Some(old) => old + &c,
                None => c,
            };
            tail.insert(k, sum);
        }
        H1Class::normalized(ambient, tails)
    }

    fn normalized(ambient: Divisor, tails: BTreeMap<Place, Tail>) -> H1Class {
        let tails = tails
            .into_iter()
            .map(|(pl, tail)| {
                let limit = -ambient.coeff(&pl);
                let tail: Tail = tail.into_iter().filter(|(k, c)| *k < limit && !c.is_zero()).collect();
                (pl, tail)
            })
            .filter(|(_, t)| !t.is_empty())
            .collect();
        H1Class { ambient, tails }
    }

    pub fn single(ambient: Divisor, place: Place, order: i64, coeff: FieldElem) -> H1Class {
        H1Class::new(ambient, [(place, order, coeff)])
    }

    pub fn ambient(&self) -> &Divisor {
        &self.ambient
    }

    pub fn tails(&self) -> &BTreeMap<Place, Tail> {
        &self.tails
    }

    /// True for the empty tail system (a representative of zero, not the
    /// only one).
    pub fn is_trivially_zero(&self) -> bool {
        self.tails.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64, &FieldElem)> {
        self.tails.iter().flat_map(|(pl, t)| t.iter().map(move |(k, c)| (pl, *k, c)))
    }

    pub fn add(&self, other: &H1Class) -> Result<H1Class> {
        if self.ambient != other.ambient {
            return Err(Error::Contract(format!(
                "adding classes over {} and {}",
                self.ambient, other.ambient
            )));
        }
        let terms = self.terms().chain(other.terms()).map(|(p, k, c)| (p.clone(), k, c.clone()));
        Ok(H1Class::new(self.ambient.clone(), terms))
    }

    pub fn scale(&self, k: &FieldElem) -> H1Class {
        let terms = self.terms().map(|(p, o, c)| (p.clone(), o, c * k));
        H1Class::new(self.ambient.clone(), terms)
    }
}

/// Tail literal: `place: c*t^k + ...`, places separated by `;`, or `0`.
impl fmt::Display for H1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tails.is_empty() {
            return write!(f, "0");
        }
        for (i, (pl, tail)) in self.tails.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{pl}: ")?;
            for (j, (k, c)) in tail.iter().enumerate() {
                let (neg, mag) = crate::algebra::poly::signed_parts(c);
                let sign = match (j, neg) {
                    (0, false) => "",
                    (0, true) => "-",
                    (_, false) => " + ",
                    (_, true) => " - ",
                };
                write!(f, "{sign}{mag}*t^{k}")?;
            }
        }
        Ok(())
    }
}

/// Outcome of [`is_zero_class`]: the witness `h` has the class's tails and
/// lies in `O(D)` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroTest {
    pub is_zero: bool,
    pub witness: Option<FunctionElement>,
}

fn check_places(curve: &HyperellipticCurve, class: &H1Class) -> Result<()> {
    for pl in class.tails.keys().chain(class.ambient.support().iter()) {
        curve.validate_place(pl)?;
    }
    for (_, _, c) in class.terms() {
        if c.field() != curve.field() {
            return Err(Error::Contract(format!("tail coefficient {c} is not in {}", curve.field())));
        }
    }
    Ok(())
}

/// Divisor `D'` allowing every pole in the tails, and the order windows
/// `[-m_Q, -n_Q - 1]` where the tails live.
fn enlarged(class: &H1Class) -> (Divisor, Vec<(Place, i64, i64)>) {
    let mut big = class.ambient.clone();
    let mut windows = Vec::new();
    for (pl, tail) in &class.tails {
        let n = class.ambient.coeff(pl);
        let m = -tail.keys().next().unwrap();
        big.add_place(pl.clone(), m - n);
        windows.push((pl.clone(), -m, -n - 1));
    }
    (big, windows)
}

/// Rows `T * K`: window coefficients of each basis function of the ansatz.
fn basis_rows(
    curve: &HyperellipticCurve,
    an: &Ansatz,
    place: &Place,
    lo: i64,
    hi: i64,
) -> Result<Vec<Vec<FieldElem>>> {
    let field = curve.field();
    let rows = laurent_rows(curve, place, &an.c, an.na, an.nb, lo, hi)?;
    Ok(rows
        .iter()
        .map(|row| {
            an.kernel
                .iter()
                .map(|v| {
                    row.iter().zip(v).filter(|(r, _)| !r.is_zero()).fold(field.zero(), |acc, (r, x)| &acc + &(r * x))
                })
                .collect()
        })
        .collect())
}

pub fn is_zero_class(curve: &HyperellipticCurve, class: &H1Class) -> Result<ZeroTest> {
    check_places(curve, class)?;
    let field = curve.field();
    if class.tails.is_empty() {
        return Ok(ZeroTest { is_zero: true, witness: Some(FunctionElement::constant(field.zero())) });
    }
    let (big, windows) = enlarged(class);
    let an = ansatz(curve, &big)?;
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    let mut rhs = Vec::new();
    for (pl, lo, hi) in &windows {
        let rf = curve.residue_field(pl);
        let deg = rf.degree();
        let block = basis_rows(curve, &an, pl, *lo, *hi)?;
        let tail = &class.tails[pl];
        for (i, k) in (*lo..=*hi).enumerate() {
            let target = rf.coords(&rf.from_base(tail.get(&k).unwrap_or(&field.zero())));
            for (j, t) in target.into_iter().enumerate() {
                rows.push(block[i * deg + j].clone());
                rhs.push(t);
            }
        }
    }
    let m = Matrix::new(field, an.kernel.len(), rows)?;
    let sol = solve_linear(&m, &rhs)?;
    Ok(match sol.solution {
        Some(v) => {
            let mut acc = vec![field.zero(); an.na + an.nb];
            for (lam, k) in v.iter().zip(&an.kernel) {
                if !lam.is_zero() {
                    for (a, x) in acc.iter_mut().zip(k) {
                        *a = &*a + &(lam * x);
                    }
                }
            }
            ZeroTest { is_zero: true, witness: Some(an.function(&acc)) }
        }
        None => ZeroTest { is_zero: false, witness: None },
    })
}

/// `dim H^1(O(D))` as the cokernel of `L(D + N inf)` onto tails at infinity
/// of orders `-n_inf - N .. -n_inf - 1`, with `N` large enough that
/// `H^1(O(D + N inf)) = 0`.
pub fn h1_dim_via_corank(curve: &HyperellipticCurve, d: &Divisor) -> Result<usize> {
    let g = curve.genus() as i64;
    let n = (2 * g - 1 - d.degree()).max(0);
    if n == 0 {
        return Ok(0);
    }
    let n_inf = d.coeff(&Place::Infinity);
    let big = d + &Divisor::place(Place::Infinity, n);
    let an = ansatz(curve, &big)?;
    let rows = basis_rows(curve, &an, &Place::Infinity, -n_inf - n, -n_inf - 1)?;
    let m = Matrix::new(curve.field(), an.kernel.len(), rows)?;
    Ok(n as usize - m.rank())
}

pub const TAIL_BUDGET: usize = 100;
const RATIONAL_CANDIDATES: usize = 12;

/// Single-term tails `1 * t^k` tried by [`nonzero_class`], in order.
pub fn tail_candidates(curve: &HyperellipticCurve, d: &Divisor) -> Vec<(Place, i64)> {
    let g = curve.genus() as i64;
    let mut places = d.support();
    places.push(Place::Infinity);
    places.extend(curve.rational_places(RATIONAL_CANDIDATES));
    places.sort();
    places.dedup();
    let mut out = Vec::new();
    for pl in places {
        let n = d.coeff(&pl);
        for k in (-(2 * g + 2)..=-1).rev() {
            if k < -n {
                out.push((pl.clone(), k));
            }
        }
    }
    out
}

/// A class that is not zero; candidates rotated by `seed`.
pub fn nonzero_class(curve: &HyperellipticCurve, d: &Divisor, seed: u64) -> Result<H1Class> {
    if h1(curve, d)? == 0 {
        return Err(Error::NoNonzeroClass(format!("h1({d}) = 0")));
    }
    let mut candidates = tail_candidates(curve, d);
    if candidates.is_empty() {
        return Err(Error::TailBudgetExhausted(0));
    }
    let shift = (seed % candidates.len() as u64) as usize;
    candidates.rotate_left(shift);
    let one = curve.field().one();
    for (pl, k) in candidates.iter().take(TAIL_BUDGET) {
        let class = H1Class::single(d.clone(), pl.clone(), *k, one.clone());
        if !is_zero_class(curve, &class)?.is_zero {
            return Ok(class);
        }
    }
    Err(Error::TailBudgetExhausted(TAIL_BUDGET.min(candidates.len())))
}

/// The map `H^1(O(D)) -> H^1(O(D'))` induced by `O(D) -> O(D')`.
pub fn push_forward(class: &H1Class, target: &Divisor) -> Result<H1Class> {
    if !target.dominates(&class.ambient) {
        return Err(Error::Contract(format!("{} is not <= {target}", class.ambient)));
    }
    Ok(H1Class::normalized(target.clone(), class.tails.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Poly};
    use crate::local::expand_at;

    const Q: Field = Field::Rational;

    fn g2() -> HyperellipticCurve {
        HyperellipticCurve::new(Poly::from_i64s(Q, &[1, 0, 0, 0, 0, 1])).unwrap()
    }

    fn pt(c: &HyperellipticCurve, x: i64, y: i64) -> Place {
        c.point(&c.field().from_i64(x), &c.field().from_i64(y)).unwrap()
    }

    #[test]
    fn permitted_tail_normalizes_to_zero() {
        let c = g2();
        let q = pt(&c, 0, -1);
        let dr = Divisor::place(q.clone(), 1);
        let class = H1Class::single(dr, q, -1, Q.one());
        assert!(class.is_trivially_zero());
        assert!(is_zero_class(&c, &class).unwrap().is_zero);
    }

    #[test]
    fn pole_at_p_is_killed_by_inverse_x() {
        let c = g2();
        let p = pt(&c, 0, 1);
        let dr = Divisor::place(pt(&c, 0, -1), 1);
        let class = H1Class::single(dr, p.clone(), -1, Q.one());
        let z = is_zero_class(&c, &class).unwrap();
        assert!(z.is_zero);
        let h = z.witness.unwrap();
        assert_eq!(h.to_string(), "1/x");
        let s = expand_at(&c, &h, &p, 1).unwrap();
        assert_eq!(s.valuation, -1);
    }

    #[test]
    fn double_pole_at_conjugate_is_nonzero() {
        let c = g2();
        let q = pt(&c, 0, -1);
        let dr = Divisor::place(q.clone(), 1);
        let class = H1Class::single(dr.clone(), q.clone(), -2, Q.one());
        assert!(!is_zero_class(&c, &class).unwrap().is_zero);
        let theta = nonzero_class(&c, &dr, 0).unwrap();
        assert_eq!(theta, class);
        assert_eq!(theta.to_string(), "(0,-1): 1*t^-2");
        // pushed to P + D_R it stays nonzero
        let big = &dr + &Divisor::place(pt(&c, 0, 1), 1);
        let omega = push_forward(&theta, &big).unwrap();
        assert!(!is_zero_class(&c, &omega).unwrap().is_zero);
    }

    #[test]
    fn corank_examples() {
        let c = g2();
        let dr = Divisor::place(pt(&c, 0, -1), 1);
        assert_eq!(h1_dim_via_corank(&c, &dr).unwrap(), 1);
        assert_eq!(h1_dim_via_corank(&c, &c.canonical_divisor()).unwrap(), 1);
        assert_eq!(h1_dim_via_corank(&c, &Divisor::place(Place::Infinity, 3)).unwrap(), 0);
        assert_eq!(h1_dim_via_corank(&c, &Divisor::zero()).unwrap(), 2);
        assert_eq!(h1_dim_via_corank(&c, &Divisor::place(Place::Infinity, -2)).unwrap(), 3);
    }

    #[test]
    fn no_nonzero_class_in_high_degree() {
        let c = g2();
        let err = nonzero_class(&c, &Divisor::place(Place::Infinity, 3), 0).unwrap_err();
        assert!(matches!(err, Error::NoNonzeroClass(_)));
    }

    #[test]
    fn push_forward_rules() {
        let c = g2();
        let q = pt(&c, 0, -1);
        let dr = Divisor::place(q.clone(), 1);
        let class = H1Class::single(Divisor::zero(), q.clone(), -1, Q.one());
        assert!(!class.is_trivially_zero());
        assert!(push_forward(&class, &dr).unwrap().is_trivially_zero());
        assert!(push_forward(&H1Class::zero(Divisor::zero()), &dr).unwrap().is_trivially_zero());
        assert!(push_forward(&class.scale(&Q.from_i64(3)), &Divisor::place(q, -1)).is_err());
    }

    #[test]
    fn display() {
        let c = g2();
        let q = pt(&c, 0, -1);
        let class = H1Class::new(
            Divisor::zero(),
            [(q.clone(), -2, Q.one()), (q, -1, Q.from_i64(-3)), (Place::Infinity, -1, Q.parse_elem("1/2").unwrap())],
        );
        assert_eq!(class.to_string(), "(0,-1): 1*t^-2 - 3*t^-1; inf: 1/2*t^-1");
    }
}

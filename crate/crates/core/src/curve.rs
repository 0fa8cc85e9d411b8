//! Odd-degree hyperelliptic curves `y^2 = f(x)` and their places.

use std::cmp::Ordering;
use std::fmt;

use crate::algebra::factor::{factor, is_irreducible};
use crate::algebra::residue::sqrt_mod_irreducible;
use crate::algebra::{is_squarefree, Field, FieldElem, Poly, ResidueField};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    f: Poly,
    genus: usize,
    /// Monic irreducible factors of `f`: the finite ramification places.
    branch_polys: Vec<Poly>,
    hints: Vec<Place>,
}

impl HyperellipticCurve {
    /// Validates `f`: squarefree, odd degree, genus at least 2.
    pub fn new(f: Poly) -> Result<HyperellipticCurve> {
        let deg = f
            .degree()
            .ok_or_else(|| Error::InvalidCurve("f is the zero polynomial".into()))?;
        if deg % 2 == 0 {
            return Err(Error::InvalidCurve(format!(
                "deg f = {deg} is even; only odd-degree models are supported"
            )));
        }
        if deg < 5 {
            return Err(Error::InvalidCurve(format!(
                "deg f = {deg} gives genus {} < 2",
                (deg - 1) / 2
            )));
        }
        if !is_squarefree(&f)? {
            return Err(Error::InvalidCurve(format!("f = {f} is not squarefree")));
        }
        let branch_polys = factor(&f).into_iter().map(|(p, _)| p).collect();
        Ok(HyperellipticCurve { genus: (deg - 1) / 2, f, branch_polys, hints: Vec::new() })
    }

    /// Attaches known points `(x, y)`; each must lie on the curve.
    pub fn with_hints(mut self, points: &[(FieldElem, FieldElem)]) -> Result<HyperellipticCurve> {
        for (x, y) in points {
            let place = self
                .point(x, y)
                .map_err(|_| Error::InvalidCurve(format!("hint ({x},{y}) is not on y^2 = {}", self.f)))?;
            if !self.hints.contains(&place) {
                self.hints.push(place);
            }
        }
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.f.field()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn hints(&self) -> &[Place] {
        &self.hints
    }

    pub fn branch_polys(&self) -> &[Poly] {
        &self.branch_polys
    }

    /// The degree-1 place at the affine point `(x, y)`.
    pub fn point(&self, x: &FieldElem, y: &FieldElem) -> Result<Place> {
        let fx = self.f.eval(x);
        if &(y * y) != &fx {
            return Err(Error::Contract(format!("({x},{y}) is not on y^2 = {}", self.f)));
        }
        let p = Poly::new(self.field(), vec![-x, self.field().one()]);
        let branch = if fx.is_zero() { Branch::Ramified } else { Branch::Split(Poly::constant(y.clone())) };
        Ok(Place::Finite { p, branch })
    }

    /// Places over the closed point of the x-line cut out by `p`.
    pub fn places_above(&self, p: &Poly) -> Result<Vec<Place>> {
        if !is_irreducible(p) {
            return Err(Error::Contract(format!("{p} is not irreducible over {}", self.field())));
        }
        Ok(self.places_above_irreducible(&p.monic()))
    }

    /// Places over `x = x0`.
    pub fn places_above_point(&self, x0: &FieldElem) -> Vec<Place> {
        let p = Poly::new(self.field(), vec![-x0, self.field().one()]);
        self.places_above_irreducible(&p)
    }

    pub(crate) fn places_above_irreducible(&self, p: &Poly) -> Vec<Place> {
        let fp = self.f.rem(p);
        if fp.is_zero() {
            return vec![Place::Finite { p: p.clone(), branch: Branch::Ramified }];
        }
        match sqrt_mod_irreducible(p, &fp) {
            Some(b) => {
                let nb = (-&b).rem(p);
                let mut out = vec![
                    Place::Finite { p: p.clone(), branch: Branch::Split(b) },
                    Place::Finite { p: p.clone(), branch: Branch::Split(nb) },
                ];
                out.sort();
                out
            }
            None => vec![Place::Finite { p: p.clone(), branch: Branch::Inert }],
        }
    }

    /// Checks that a place is well formed on this curve.
    pub fn validate_place(&self, place: &Place) -> Result<()> {
        let Place::Finite { p, branch } = place else { return Ok(()) };
        if p.field() != self.field() || !p.is_monic() || !is_irreducible(p) {
            return Err(Error::Contract(format!("{p} is not a monic irreducible over {}", self.field())));
        }
        let fp = self.f.rem(p);
        let ok = match branch {
            Branch::Ramified => fp.is_zero(),
            Branch::Split(b) => {
                !fp.is_zero() && b.deg_i64() < p.deg_i64() && (b * b).rem(p) == fp
            }
            Branch::Inert => !fp.is_zero() && sqrt_mod_irreducible(p, &fp).is_none(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Contract(format!("{place} is not a place of y^2 = {}", self.f)))
        }
    }

    /// Residue field of a place. Inert places adjoin `sqrt(f mod p)`.
    pub fn residue_field(&self, place: &Place) -> ResidueField {
        match place {
            Place::Infinity => ResidueField::new(Poly::x(self.field())),
            Place::Finite { p, branch: Branch::Inert } => {
                ResidueField::with_sqrt(p.clone(), self.f.rem(p))
            }
            Place::Finite { p, .. } => ResidueField::new(p.clone()),
        }
    }

    /// Degree-1 places in the search order used by the constructions:
    /// hints first, then infinity, then places over `x = 0, 1, -1, 2, -2, ...`
    /// (all residues over F_p, `|x| <= 64` over Q).
    pub fn rational_places(&self, limit: usize) -> Vec<Place> {
        let mut out: Vec<Place> = self.hints.clone();
        let push = |out: &mut Vec<Place>, pl: Place| {
            if !out.contains(&pl) {
                out.push(pl);
            }
        };
        push(&mut out, Place::Infinity);
        let field = self.field();
        let span = match field {
            Field::Prime(p) => p as i64,
            Field::Rational => 129,
        };
        let mut k: i64 = 0;
        while out.len() < limit {
            // 0, 1, -1, 2, -2, ... (distinct residues only over F_p)
            let x0 = if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) };
            k += 1;
            if k > span.min(1 << 22) {
                break;
            }
            if let Field::Prime(p) = field {
                if x0 < 0 && (-x0) as u64 * 2 >= p {
                    continue;
                }
                if x0 > 0 && x0 as u64 * 2 > p {
                    continue;
                }
            }
            for pl in self.places_above_point(&field.from_i64(x0)) {
                if pl.degree() == 1 && out.len() < limit {
                    push(&mut out, pl);
                }
            }
        }
        out
    }
}

/// How `y` behaves over an irreducible `p(x)` not dividing the modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `y = b(x) mod p` with `b^2 = f mod p`; two places over `p`.
    Split(Poly),
    /// `p | f`; `y` is a uniformizer.
    Ramified,
    /// `f mod p` is not a square; a single place of degree `2 deg p`.
    Inert,
}

impl Branch {
    fn rank(&self) -> u8 {
        match self {
            Branch::Split(_) => 0,
            Branch::Ramified => 1,
            Branch::Inert => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity,
    Finite { p: Poly, branch: Branch },
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite { p, branch: Branch::Inert } => 2 * p.degree().unwrap(),
            Place::Finite { p, .. } => p.degree().unwrap(),
        }
    }

    /// Ramification index over the x-line.
    pub fn ramification(&self) -> i64 {
        match self {
            Place::Infinity | Place::Finite { branch: Branch::Ramified, .. } => 2,
            Place::Finite { .. } => 1,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn minpoly(&self) -> Option<&Poly> {
        match self {
            Place::Infinity => None,
            Place::Finite { p, .. } => Some(p),
        }
    }

    /// `(x0, y0)` for a finite place of degree 1.
    pub fn coordinates(&self) -> Option<(FieldElem, FieldElem)> {
        match self {
            Place::Finite { p, branch } if p.degree() == Some(1) => {
                let x0 = -&p.coeff(0);
                match branch {
                    Branch::Split(b) => Some((x0, b.coeff(0))),
                    Branch::Ramified => Some((x0, p.field().zero())),
                    Branch::Inert => None,
                }
            }
            _ => None,
        }
    }
}

/// Degree, then finite before infinite, then minimal polynomial, then branch.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        let kind = |p: &Place| u8::from(p.is_infinite());
        self.degree().cmp(&other.degree()).then(kind(self).cmp(&kind(other))).then_with(|| {
            match (self, other) {
                (Place::Finite { p: a, branch: ba }, Place::Finite { p: b, branch: bb }) => {
                    a.cmp(b).then(ba.rank().cmp(&bb.rank())).then_with(|| match (ba, bb) {
                        (Branch::Split(x), Branch::Split(y)) => x.cmp(y),
                        _ => Ordering::Equal,
                    })
                }
                _ => Ordering::Equal,
            }
        })
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((x0, y0)) = self.coordinates() {
            return write!(f, "({x0},{y0})");
        }
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite { p, branch } => {
                let b = match branch {
                    Branch::Split(b) => b.to_string(),
                    Branch::Ramified => "0".into(),
                    Branch::Inert => "inert".into(),
                };
                write!(f, "[{p}; {b}]")
            }
        }
    }
}

//! The rank-3 example: `F = O` inside `E = O(P) + V`, with
//! `V = ext(theta; O(D_Q), O(-D_R))` and quotient
//! `Q = ext(omega; O(P + D_Q), O(-D_R))`, where `K ~ P + D_Q + D_R`.

use crate::algebra::FieldElem;
use crate::bundle::BundleExpr;
use crate::cohomology::{nonzero_class, push_forward, H1Class};
use crate::curve::{HyperellipticCurve, Place};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::riemann_roch::rr_basis;

/// Candidate places tried for `P`.
pub const PLACE_BUDGET: usize = 200;
/// Sections of `L(K - P)` tried per candidate `P`.
pub const SECTION_BUDGET: usize = 500;
const SPLIT_LIMIT: usize = 10_000;

/// Disjointness of `P` and `supp(D_Q)`: the nowhere-vanishing section of
/// `O(P) + O(D_Q)` is `(1, 1)` exactly when this holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaWitness {
    pub p: Place,
    pub d_q_support: Vec<Place>,
    pub disjoint: bool,
}

impl SigmaWitness {
    pub fn new(p: &Place, d_q: &Divisor) -> SigmaWitness {
        let d_q_support = d_q.support();
        let disjoint = !d_q_support.contains(p);
        SigmaWitness { p: p.clone(), d_q_support, disjoint }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionData {
    pub curve: HyperellipticCurve,
    pub seed: u64,
    pub p: Place,
    pub d: Divisor,
    pub d_q: Divisor,
    pub d_r: Divisor,
    pub theta: H1Class,
    pub omega: H1Class,
    pub sigma: SigmaWitness,
    pub f: BundleExpr,
    pub v: BundleExpr,
    pub e: BundleExpr,
    pub q: BundleExpr,
}

impl ConstructionData {
    /// Assembles the bundles from explicit parts. No claim is checked here;
    /// `theta` must live over `D_Q + D_R` and `omega` over `P + D_Q + D_R`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        curve: HyperellipticCurve,
        seed: u64,
        p: Place,
        d: Divisor,
        d_q: Divisor,
        d_r: Divisor,
        theta: H1Class,
        omega: H1Class,
    ) -> Result<ConstructionData> {
        let p_div = Divisor::place(p.clone(), 1);
        let f = BundleExpr::line(Divisor::zero());
        let v = BundleExpr::ext("theta", theta.clone(), BundleExpr::line(d_q.clone()), BundleExpr::line(-&d_r))?;
        let e = BundleExpr::sum(vec![BundleExpr::line(p_div.clone()), v.clone()])?;
        let q = BundleExpr::ext("omega", omega.clone(), BundleExpr::line(&p_div + &d_q), BundleExpr::line(-&d_r))?;
        let sigma = SigmaWitness::new(&p, &d_q);
        Ok(ConstructionData { curve, seed, p, d, d_q, d_r, theta, omega, sigma, f, v, e, q })
    }

    /// As [`from_parts`](Self::from_parts) with `omega` the image of `theta`.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        curve: HyperellipticCurve,
        seed: u64,
        p: Place,
        d: Divisor,
        d_q: Divisor,
        d_r: Divisor,
        theta: H1Class,
    ) -> Result<ConstructionData> {
        let target = &(&Divisor::place(p.clone(), 1) + &d_q) + &d_r;
        let omega = push_forward(&theta, &target)?;
        ConstructionData::from_parts(curve, seed, p, d, d_q, d_r, theta, omega)
    }

    pub fn classes(&self) -> [(&'static str, &H1Class); 2] {
        [("theta", &self.theta), ("omega", &self.omega)]
    }
}

/// Integer vectors of length `n` with first nonzero entry 1, by increasing
/// height, at most `limit` of them.
fn combinations(n: usize, limit: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut h = 1i64;
    while out.len() < limit {
        let mut batch = Vec::new();
        let mut v = vec![-h; n];
        loop {
            let lead = v.iter().position(|&c| c != 0);
            if lead.is_some_and(|i| v[i] == 1) && v.iter().any(|c| c.abs() == h) {
                batch.push(v.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if v[i] < h {
                    v[i] += 1;
                    break;
                }
                v[i] = -h;
            }
            if v.iter().all(|&c| c == -h) {
                break;
            }
        }
        let zig = |c: i64| if c > 0 { 2 * c - 1 } else { -2 * c };
        batch.sort_by_key(|v| {
            let nnz = v.iter().filter(|&&c| c != 0).count();
            let lead = v.iter().position(|&c| c != 0).unwrap();
            (nnz, lead, v.iter().map(|&c| zig(c)).collect::<Vec<_>>())
        });
        out.extend(batch.into_iter().take(limit - out.len()));
        if h as usize > limit {
            break;
        }
        h += 1;
    }
    out
}

fn rotated<T>(mut v: Vec<T>, seed: u64) -> Vec<T> {
    if !v.is_empty() {
        let k = (seed % v.len() as u64) as usize;
        v.rotate_left(k);
    }
    v
}

/// Calls `accept` on each `(P, D)` with `K ~ P + D`, `D >= 0`, `P` not in
/// `supp(D)`, in search order, until it returns `Some`.
fn search_decompositions<T>(
    curve: &HyperellipticCurve,
    seed: u64,
    mut accept: impl FnMut(&Place, &Divisor) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let k = curve.canonical_divisor();
    let field = curve.field();
    for p in rotated(curve.rational_places(PLACE_BUDGET), seed) {
        let k_minus_p = &k - &Divisor::place(p.clone(), 1);
        let space = rr_basis(curve, &k_minus_p)?;
        let mut seen: Vec<Divisor> = Vec::new();
        for coeffs in rotated(combinations(space.dim(), SECTION_BUDGET), seed) {
            let coeffs: Vec<FieldElem> = coeffs.iter().map(|&c| field.from_i64(c)).collect();
            let s = space.combine(&coeffs, curve);
            if s.is_zero() {
                continue;
            }
            let d = &curve.divisor_of(&s)? + &k_minus_p;
            if d.coeff(&p) != 0 || seen.contains(&d) {
                continue;
            }
            if let Some(t) = accept(&p, &d)? {
                return Ok(Some(t));
            }
            seen.push(d);
        }
    }
    Ok(None)
}

fn exhausted(curve: &HyperellipticCurve) -> Error {
    let hint = match curve.field() {
        crate::algebra::Field::Rational => "supply a non-Weierstrass rational point as a hint",
        _ => "try another seed or a larger prime",
    };
    Error::SearchExhausted(format!(
        "no decomposition K ~ P + D within {PLACE_BUDGET} places x {SECTION_BUDGET} sections; {hint}"
    ))
}

/// A degree-1 place `P` and `D >= 0` with `K ~ P + D` and `P` not in `supp(D)`.
pub fn decompose_canonical(curve: &HyperellipticCurve, seed: u64) -> Result<(Place, Divisor)> {
    search_decompositions(curve, seed, |p, d| Ok(Some((p.clone(), d.clone()))))?.ok_or_else(|| exhausted(curve))
}

/// `D = D_Q + D_R` with both effective, `deg D_Q = g - 2`, `deg D_R = g - 1`.
/// Valid splits are enumerated with the first place taking as much as it
/// can; `seed` picks among them.
pub fn split_divisor(d: &Divisor, g: usize, seed: u64) -> Result<(Divisor, Divisor)> {
    let g = g as i64;
    if !d.is_effective() && !d.is_zero() || d.degree() != 2 * g - 3 {
        return Err(Error::Contract(format!("split_divisor needs D >= 0 of degree {}, got {d}", 2 * g - 3)));
    }
    let terms: Vec<(Place, i64)> = d.terms().map(|(p, n)| (p.clone(), n)).collect();
    let mut splits = Vec::new();
    let mut chosen = vec![0i64; terms.len()];
    fn walk(
        terms: &[(Place, i64)],
        i: usize,
        left: i64,
        chosen: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if out.len() >= SPLIT_LIMIT {
            return;
        }
        if i == terms.len() {
            if left == 0 {
                out.push(chosen.clone());
            }
            return;
        }
        let deg = terms[i].0.degree() as i64;
        for m in (0..=terms[i].1).rev() {
            if m * deg <= left {
                chosen[i] = m;
                walk(terms, i + 1, left - m * deg, chosen, out);
            }
        }
        chosen[i] = 0;
    }
    walk(&terms, 0, g - 2, &mut chosen, &mut splits);
    if splits.is_empty() {
        return Err(Error::NoValidSplit(d.to_string()));
    }
    let pick = &splits[(seed % splits.len() as u64) as usize];
    let d_q = Divisor::from_terms(terms.iter().zip(pick).map(|((p, _), &m)| (p.clone(), m)));
    let d_r = d - &d_q;
    Ok((d_q, d_r))
}

/// Finds `(P, D, D_Q, D_R, theta)` and assembles the bundles.
pub fn build(curve: &HyperellipticCurve, seed: u64) -> Result<ConstructionData> {
    let g = curve.genus();
    let found = search_decompositions(curve, seed, |p, d| match split_divisor(d, g, seed) {
        Ok((d_q, d_r)) => Ok(Some((p.clone(), d.clone(), d_q, d_r))),
        Err(Error::NoValidSplit(_)) => Ok(None),
        Err(e) => Err(e),
    })?;
    let Some((p, d, d_q, d_r)) = found else { return Err(exhausted(curve)) };
    let theta = match nonzero_class(curve, &(&d_q + &d_r), seed) {
        Ok(t) => t,
        Err(Error::NoNonzeroClass(m)) => {
            return Err(Error::Contract(format!("h1(D_Q + D_R) vanished for a canonical split: {m}")))
        }
        Err(e) => return Err(e),
    };
    ConstructionData::assemble(curve.clone(), seed, p, d, d_q, d_r, theta)
}

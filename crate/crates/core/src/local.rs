//! Laurent expansions at places.
//!
//! Uniformizers: `x - theta` at unramified finite places, `y` at ramified
//! ones, `x^g / y` at infinity.

use crate::algebra::{FieldElem, Poly, ResElem, ResidueField};
use crate::curve::{Branch, HyperellipticCurve, Place};
use crate::error::{Error, Result};
use crate::function::FunctionElement;

/// Precision of series that are known exactly.
const EXACT: i64 = i64::MAX / 4;
pub(crate) const MAX_PRECISION: i64 = 1 << 14;

/// `sum coeffs[i] s^(val + i) + O(s^prec)`; coefficients past the vector
/// (and below `prec`) are zero.
#[derive(Clone, Debug)]
pub(crate) struct Series {
    pub val: i64,
    pub coeffs: Vec<ResElem>,
    pub prec: i64,
}

impl Series {
    fn is_exact(&self) -> bool {
        self.prec >= EXACT / 2
    }

    /// Coefficient of `s^k`; `None` beyond the known precision.
    pub fn coeff(&self, k: i64, rf: &ResidueField) -> Option<ResElem> {
        if k >= self.prec {
            return None;
        }
        if k < self.val {
            return Some(rf.zero());
        }
        Some(self.coeffs.get((k - self.val) as usize).cloned().unwrap_or_else(|| rf.zero()))
    }
}

pub(crate) struct Local<'a> {
    pub rf: &'a ResidueField,
}

impl<'a> Local<'a> {
    fn normalize(&self, mut s: Series) -> Series {
        let lead = s.coeffs.iter().position(|c| !self.rf.is_zero(c));
        match lead {
            None => {
                s.coeffs.clear();
                s.val = s.prec;
            }
            Some(i) => {
                s.coeffs.drain(..i);
                s.val += i as i64;
                let keep = (s.prec - s.val).max(0);
                if (s.coeffs.len() as i64) > keep {
                    s.coeffs.truncate(keep as usize);
                }
                while s.coeffs.last().is_some_and(|c| self.rf.is_zero(c)) {
                    s.coeffs.pop();
                }
                if s.coeffs.is_empty() {
                    s.val = s.prec;
                }
            }
        }
        s
    }

    pub fn exact(&self, val: i64, coeffs: Vec<ResElem>) -> Series {
        self.normalize(Series { val, coeffs, prec: EXACT })
    }

    pub fn constant(&self, c: ResElem) -> Series {
        self.exact(0, vec![c])
    }

    pub fn monomial(&self, k: i64) -> Series {
        self.exact(k, vec![self.rf.one()])
    }

    pub fn truncate(&self, mut s: Series, prec: i64) -> Series {
        s.prec = s.prec.min(prec);
        self.normalize(s)
    }

    pub fn add(&self, a: &Series, b: &Series) -> Series {
        let prec = a.prec.min(b.prec);
        let live = [a, b].into_iter().filter(|s| !s.coeffs.is_empty());
        let lo = live.clone().map(|s| s.val).min().unwrap_or(prec);
        let hi = live.map(|s| s.val + s.coeffs.len() as i64).max().unwrap_or(prec).min(prec);
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for k in lo..hi {
            let mut c = self.rf.zero();
            for s in [a, b] {
                if k >= s.val && ((k - s.val) as usize) < s.coeffs.len() {
                    c = self.rf.add(&c, &s.coeffs[(k - s.val) as usize]);
                }
            }
            coeffs.push(c);
        }
        self.normalize(Series { val: lo, coeffs, prec })
    }

    pub fn mul(&self, a: &Series, b: &Series) -> Series {
        let prec = (a.val + b.prec).min(b.val + a.prec).min(EXACT);
        let val = a.val + b.val;
        let (la, lb) = (a.coeffs.len(), b.coeffs.len());
        if la == 0 || lb == 0 {
            return self.normalize(Series { val, coeffs: Vec::new(), prec });
        }
        let n = ((la + lb - 1) as i64).min((prec - val).max(0)) as usize;
        let mut coeffs = vec![self.rf.zero(); n];
        for (i, x) in a.coeffs.iter().enumerate().take(n) {
            if self.rf.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] = self.rf.add(&coeffs[i + j], &self.rf.mul(x, y));
            }
        }
        self.normalize(Series { val, coeffs, prec })
    }

    /// Inverse to relative precision at most `cap`; `None` when no
    /// coefficient of `a` is known to be nonzero.
    pub fn inv(&self, a: &Series, cap: i64) -> Option<Series> {
        let a0 = a.coeffs.first()?;
        let rel = if a.is_exact() { cap } else { (a.prec - a.val).min(cap) };
        let n = rel.max(1) as usize;
        let inv0 = self.rf.inv(a0)?;
        let mut out: Vec<ResElem> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = self.rf.zero();
            for i in 1..=k.min(a.coeffs.len() - 1) {
                acc = self.rf.add(&acc, &self.rf.mul(&a.coeffs[i], &out[k - i]));
            }
            out.push(self.rf.neg(&self.rf.mul(&inv0, &acc)));
        }
        Some(self.normalize(Series { val: -a.val, coeffs: out, prec: -a.val + rel }))
    }

    pub fn pow(&self, a: &Series, e: usize) -> Series {
        let mut acc = self.monomial(0);
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `p(x)` for a base-field polynomial `p`.
    pub fn poly_at(&self, p: &Poly, x: &Series) -> Series {
        let mut acc = self.exact(0, Vec::new());
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.constant(self.rf.from_base(c)));
        }
        acc
    }

    /// Power-series coefficients `[c_0, .., c_{n-1}]` of `sum_j p_j u^j` with
    /// `u` a power series; used by the fixed-point solvers below.
    fn compose_truncated(&self, p: &[ResElem], u: &[ResElem], n: usize) -> Vec<ResElem> {
        let mut acc = vec![self.rf.zero(); n];
        for c in p.iter().rev() {
            let mut next = vec![self.rf.zero(); n];
            for (i, x) in acc.iter().enumerate() {
                if self.rf.is_zero(x) {
                    continue;
                }
                for (j, y) in u.iter().enumerate().take(n - i) {
                    next[i + j] = self.rf.add(&next[i + j], &self.rf.mul(x, y));
                }
            }
            next[0] = self.rf.add(&next[0], c);
            acc = next;
        }
        acc
    }
}

/// Expansions of `x` and `y` at a place, to parameter precision `n`.
pub(crate) struct Parametrization {
    pub rf: ResidueField,
    pub n: i64,
    pub x: Series,
    pub y: Series,
}

impl Parametrization {
    pub fn new(curve: &HyperellipticCurve, place: &Place, n: usize) -> Parametrization {
        let rf = curve.residue_field(place);
        let n = n.max(2);
        let (x, y) = {
            let l = Local { rf: &rf };
            match place {
                Place::Finite { branch: Branch::Ramified, .. } => ramified(curve, &l, n),
                Place::Finite { branch, .. } => unramified(curve, &l, branch, n),
                Place::Infinity => at_infinity(curve, &l, n),
            }
        };
        Parametrization { rf, n: n as i64, x, y }
    }

    pub fn local(&self) -> Local<'_> {
        Local { rf: &self.rf }
    }

    /// Series of `a(x) + b(x) y`.
    pub fn numerator(&self, a: &Poly, b: &Poly) -> Series {
        let l = self.local();
        let pa = l.poly_at(a, &self.x);
        let pb = l.poly_at(b, &self.x);
        l.add(&pa, &l.mul(&pb, &self.y))
    }

    pub fn function(&self, h: &FunctionElement) -> Option<Series> {
        let l = self.local();
        let num = self.numerator(h.a(), h.b());
        let den = l.poly_at(h.c(), &self.x);
        let cap = if num.is_exact() { self.n } else { num.prec - num.val };
        let inv = l.inv(&den, cap.clamp(1, self.n))?;
        Some(l.mul(&num, &inv))
    }
}

fn unramified(curve: &HyperellipticCurve, l: &Local, branch: &Branch, n: usize) -> (Series, Series) {
    let rf = l.rf;
    let theta = rf.theta();
    let y0 = match branch {
        Branch::Split(b) => rf.from_poly(b),
        Branch::Inert => rf.sqrt_generator().unwrap(),
        Branch::Ramified => unreachable!(),
    };
    let big_f = rf.taylor_shift(curve.f(), &theta);
    // y^2 = F(s), y = sum y_k s^k
    let inv_2y0 = rf.inv(&rf.add(&y0, &y0)).unwrap();
    let mut ys = vec![y0];
    for k in 1..n {
        let mut acc = big_f.get(k).cloned().unwrap_or_else(|| rf.zero());
        for i in 1..k {
            acc = rf.sub(&acc, &rf.mul(&ys[i], &ys[k - i]));
        }
        ys.push(rf.mul(&acc, &inv_2y0));
    }
    let x = l.exact(0, vec![theta, rf.one()]);
    let y = l.normalize(Series { val: 0, coeffs: ys, prec: n as i64 });
    (x, y)
}

fn ramified(curve: &HyperellipticCurve, l: &Local, n: usize) -> (Series, Series) {
    let rf = l.rf;
    let theta = rf.theta();
    let big_f = rf.taylor_shift(curve.f(), &theta);
    let inv_f1 = rf.inv(&big_f[1]).unwrap();
    // F(u) = s^2 with u = x - theta; u <- (s^2 - sum_{j>=2} F_j u^j) / F_1
    let mut high = big_f.clone();
    high[0] = rf.zero();
    high[1] = rf.zero();
    let mut u = vec![rf.zero(); n];
    for _ in 0..n / 2 + 2 {
        let hu = l.compose_truncated(&high, &u, n);
        let mut next: Vec<ResElem> = hu.iter().map(|c| rf.neg(&rf.mul(c, &inv_f1))).collect();
        if n > 2 {
            next[2] = rf.add(&next[2], &inv_f1);
        }
        u = next;
    }
    u[0] = rf.add(&u[0], &theta);
    let x = l.normalize(Series { val: 0, coeffs: u, prec: n as i64 });
    (x, l.monomial(1))
}

fn at_infinity(curve: &HyperellipticCurve, l: &Local, n: usize) -> (Series, Series) {
    let rf = l.rf;
    let g = curve.genus();
    // w = 1/x satisfies w = t^2 frev(w), frev the reversed f
    let frev: Vec<ResElem> = curve.f().coeffs().iter().rev().map(|c| rf.from_base(c)).collect();
    let mut w = vec![rf.zero(); n];
    for _ in 0..n / 2 + 2 {
        let fw = l.compose_truncated(&frev, &w, n);
        let mut next = vec![rf.zero(); n];
        for k in 2..n {
            next[k] = fw[k - 2].clone();
        }
        w = next;
    }
    let w = l.normalize(Series { val: 0, coeffs: w, prec: n as i64 });
    let x = l.inv(&w, EXACT).unwrap();
    let y = l.mul(&l.pow(&x, g), &l.monomial(-1));
    (x, y)
}

/// A truncated Laurent expansion at a place: `coeffs[i]` multiplies
/// `t^(valuation + i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    pub place: Place,
    pub valuation: i64,
    pub coeffs: Vec<ResElem>,
}

impl LaurentSeries {
    pub fn coeff(&self, k: i64) -> Option<&ResElem> {
        if k < self.valuation {
            return None;
        }
        self.coeffs.get((k - self.valuation) as usize)
    }

    /// Coefficients as base-field elements, when they all lie in it.
    pub fn base_coeffs(&self) -> Option<Vec<FieldElem>> {
        self.coeffs
            .iter()
            .map(|c| if c.im.is_zero() && c.re.is_constant() { Some(c.re.coeff(0)) } else { None })
            .collect()
    }
}

/// Series of `h` known at least up to (excluding) `s^prec`.
pub(crate) fn series_to(
    curve: &HyperellipticCurve,
    h: &FunctionElement,
    place: &Place,
    prec: i64,
) -> Result<(ResidueField, Series)> {
    let v = curve.valuation(h, place)?;
    let mut n = (prec - v).max(1) + h.c().deg_i64() * 2 + 4;
    loop {
        let param = Parametrization::new(curve, place, n as usize);
        if let Some(s) = param.function(h) {
            if s.prec >= prec && (s.val == v || s.val >= prec) {
                if s.val != v && s.val < prec {
                    return Err(Error::Contract(format!("expansion of {h} at {place} disagrees with its valuation")));
                }
                let l = param.local();
                let s = l.truncate(s, prec);
                return Ok((param.rf, s));
            }
        }
        if n > MAX_PRECISION {
            return Err(Error::Contract(format!("expansion of {h} at {place} did not converge")));
        }
        n *= 2;
    }
}

/// The first `n_terms` Laurent coefficients of a nonzero `h` at `place`.
pub fn expand_at(
    curve: &HyperellipticCurve,
    h: &FunctionElement,
    place: &Place,
    n_terms: usize,
) -> Result<LaurentSeries> {
    let v = curve.valuation(h, place)?;
    let (rf, s) = series_to(curve, h, place, v + n_terms as i64)?;
    let coeffs = (0..n_terms as i64).map(|i| s.coeff(v + i, &rf).unwrap()).collect();
    let out = LaurentSeries { place: place.clone(), valuation: v, coeffs };
    if n_terms > 0 && rf.is_zero(&out.coeffs[0]) {
        return Err(Error::Contract(format!("leading coefficient of {h} at {place} vanished")));
    }
    Ok(out)
}

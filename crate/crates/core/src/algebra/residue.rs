//! Residue fields of places: `K[t]/(p(t))`, optionally extended by a square
//! root `z` with `z^2 = delta` (for places where `y` generates a quadratic
//! extension of the residue field of the x-line).

use num_bigint::BigUint;

use super::factor::factor;
use super::field::{Field, FieldElem};
use super::linalg::{solve_linear, Matrix};
use super::poly::Poly;

/// Element `re + im*z`, both parts reduced modulo the defining polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResElem {
    pub re: Poly,
    pub im: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    modulus: Poly,
    ext: Option<Poly>,
}

impl ResidueField {
    /// `K[t]/(modulus)`; `modulus` must be monic irreducible.
    pub fn new(modulus: Poly) -> ResidueField {
        debug_assert!(modulus.is_monic());
        ResidueField { modulus, ext: None }
    }

    /// `K[t]/(modulus)` adjoined `sqrt(delta)`; `delta` must be a non-square.
    pub fn with_sqrt(modulus: Poly, delta: Poly) -> ResidueField {
        let delta = delta.rem(&modulus);
        ResidueField { modulus, ext: Some(delta) }
    }

    pub fn base(&self) -> Field {
        self.modulus.field()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn base_degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    /// Dimension over the base field.
    pub fn degree(&self) -> usize {
        self.base_degree() * if self.ext.is_some() { 2 } else { 1 }
    }

    pub fn zero(&self) -> ResElem {
        ResElem { re: Poly::zero(self.base()), im: Poly::zero(self.base()) }
    }

    pub fn one(&self) -> ResElem {
        self.from_base(&self.base().one())
    }

    pub fn from_base(&self, c: &FieldElem) -> ResElem {
        self.from_poly(&Poly::constant(c.clone()))
    }

    pub fn from_poly(&self, p: &Poly) -> ResElem {
        ResElem { re: p.rem(&self.modulus), im: Poly::zero(self.base()) }
    }

    /// The class of `t`, a root of the modulus.
    pub fn theta(&self) -> ResElem {
        self.from_poly(&Poly::x(self.base()))
    }

    /// The adjoined square root, if any.
    pub fn sqrt_generator(&self) -> Option<ResElem> {
        self.ext.as_ref().map(|_| ResElem { re: Poly::zero(self.base()), im: Poly::one(self.base()) })
    }

    pub fn is_zero(&self, a: &ResElem) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }

    pub fn add(&self, a: &ResElem, b: &ResElem) -> ResElem {
        ResElem { re: &a.re + &b.re, im: &a.im + &b.im }
    }

    pub fn sub(&self, a: &ResElem, b: &ResElem) -> ResElem {
        ResElem { re: &a.re - &b.re, im: &a.im - &b.im }
    }

    pub fn neg(&self, a: &ResElem) -> ResElem {
        ResElem { re: -&a.re, im: -&a.im }
    }

    pub fn scale(&self, a: &ResElem, c: &FieldElem) -> ResElem {
        ResElem { re: a.re.scale(c), im: a.im.scale(c) }
    }

    pub fn mul(&self, a: &ResElem, b: &ResElem) -> ResElem {
        let m = &self.modulus;
        match &self.ext {
            None => ResElem { re: (&a.re * &b.re).rem(m), im: Poly::zero(self.base()) },
            Some(delta) => {
                let re = &(&a.re * &b.re) + &(&(&a.im * &b.im) * delta);
                let im = &(&a.re * &b.im) + &(&a.im * &b.re);
                ResElem { re: re.rem(m), im: im.rem(m) }
            }
        }
    }

    pub fn inv(&self, a: &ResElem) -> Option<ResElem> {
        let m = &self.modulus;
        match &self.ext {
            None => a.re.inv_mod(m).map(|re| ResElem { re, im: Poly::zero(self.base()) }),
            Some(delta) => {
                // (re + im z)^{-1} = (re - im z) / (re^2 - im^2 delta)
                let norm = (&(&a.re * &a.re) - &(&(&a.im * &a.im) * delta)).rem(m);
                let n_inv = norm.inv_mod(m)?;
                Some(ResElem { re: (&a.re * &n_inv).rem(m), im: (&(-&a.im) * &n_inv).rem(m) })
            }
        }
    }

    pub fn pow_bits(&self, a: &ResElem, bits: &[bool]) -> ResElem {
        let mut acc = self.one();
        for &bit in bits.iter().rev() {
            acc = self.mul(&acc, &acc);
            if bit {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Coordinates over the base field: `deg` coefficients of `re`, then of `im`.
    pub fn coords(&self, a: &ResElem) -> Vec<FieldElem> {
        let d = self.base_degree();
        let mut out: Vec<FieldElem> = (0..d).map(|i| a.re.coeff(i)).collect();
        if self.ext.is_some() {
            out.extend((0..d).map(|i| a.im.coeff(i)));
        }
        out
    }

    /// Evaluates a base-field polynomial at a residue element.
    pub fn eval_poly(&self, p: &Poly, at: &ResElem) -> ResElem {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, at), &self.from_base(c));
        }
        acc
    }

    /// Taylor shift: the coefficients of `p(at + s)` as a polynomial in `s`.
    pub fn taylor_shift(&self, p: &Poly, at: &ResElem) -> Vec<ResElem> {
        // Horner in s: acc <- acc*(at + s) + c
        let mut acc: Vec<ResElem> = Vec::new();
        for c in p.coeffs().iter().rev() {
            let mut next = vec![self.zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i] = self.add(&next[i], &self.mul(a, at));
                next[i + 1] = self.add(&next[i + 1], a);
            }
            next[0] = self.add(&next[0], &self.from_base(c));
            acc = next;
        }
        acc
    }

    /// Order of the multiplicative group plus one, for finite residue fields.
    fn order(&self) -> Option<BigUint> {
        match self.base() {
            Field::Rational => None,
            Field::Prime(p) => Some(BigUint::from(p).pow(self.degree() as u32)),
        }
    }
}

fn bits_of(n: &BigUint) -> Vec<bool> {
    (0..n.bits()).map(|i| n.bit(i)).collect()
}

/// A square root of `delta` in `K[t]/(modulus)` (no quadratic extension), as
/// a reduced polynomial in `t`; `None` when `delta` is not a square there.
pub fn sqrt_mod_irreducible(modulus: &Poly, delta: &Poly) -> Option<Poly> {
    let rf = ResidueField::new(modulus.clone());
    let a = rf.from_poly(delta);
    if rf.is_zero(&a) {
        return Some(Poly::zero(rf.base()));
    }
    let root = match rf.base() {
        Field::Prime(_) => tonelli_shanks(&rf, &a),
        Field::Rational if rf.base_degree() == 1 => {
            let c = a.re.coeff(0).sqrt()?;
            Some(rf.from_base(&c))
        }
        Field::Rational => trager_sqrt(&rf, &a),
    }?;
    debug_assert_eq!(rf.mul(&root, &root), a);
    Some(root.re)
}

fn tonelli_shanks(rf: &ResidueField, a: &ResElem) -> Option<ResElem> {
    let q = rf.order().unwrap();
    let one = rf.one();
    let minus_one = rf.neg(&one);
    let half = (&q - 1u32) >> 1;
    if rf.pow_bits(a, &bits_of(&half)) != one {
        return None;
    }
    let mut odd = &q - 1u32;
    let mut s = 0u32;
    while !odd.bit(0) {
        odd >>= 1;
        s += 1;
    }
    let p = rf.base().characteristic();
    let d = rf.base_degree();
    // Deterministic search for a non-residue: enumerate elements by base-p digits.
    let mut idx: u64 = 2;
    let z = loop {
        let mut digits = Vec::with_capacity(d);
        let mut n = idx;
        for _ in 0..d {
            digits.push(rf.base().from_i64((n % p) as i64));
            n /= p;
        }
        let cand = rf.from_poly(&Poly::new(rf.base(), digits));
        if rf.pow_bits(&cand, &bits_of(&half)) == minus_one {
            break cand;
        }
        idx += 1;
    };
    let mut m = s;
    let mut c = rf.pow_bits(&z, &bits_of(&odd));
    let mut t = rf.pow_bits(a, &bits_of(&odd));
    let mut r = rf.pow_bits(a, &bits_of(&((&odd + 1u32) >> 1)));
    while t != one {
        let mut i = 0;
        let mut tt = t.clone();
        while tt != one {
            tt = rf.mul(&tt, &tt);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = rf.mul(&b, &b);
        }
        m = i;
        c = rf.mul(&b, &b);
        t = rf.mul(&t, &c);
        r = rf.mul(&r, &b);
    }
    Some(r)
}

/// Square roots in a number field `Q(theta)` via Trager's norm method: for a
/// shift `s` making the norm of `(z - s*theta)^2 - a` squarefree, the
/// quadratic splits over `Q(theta)` iff that norm is reducible over `Q`, and a
/// gcd with one rational factor exposes the root.
fn trager_sqrt(rf: &ResidueField, a: &ResElem) -> Option<ResElem> {
    let q = Field::Rational;
    let d = rf.base_degree();
    let theta = rf.theta();
    for s in 0..32i64 {
        let st = rf.scale(&theta, &q.from_i64(s));
        // Interpolate T(z) = N((z - s theta)^2 - a) from 2d+1 samples.
        let npts = 2 * d + 1;
        let mut rows = Vec::with_capacity(npts);
        let mut rhs = Vec::with_capacity(npts);
        for k in 0..npts {
            let z0 = rf.from_base(&q.from_i64(k as i64));
            let diff = rf.sub(&z0, &st);
            let e = rf.sub(&rf.mul(&diff, &diff), a);
            rhs.push(norm(rf, &e));
            rows.push((0..npts).map(|j| q.from_i64(k as i64).pow(j as u64)).collect());
        }
        let vand = Matrix::new(q, npts, rows).unwrap();
        let coeffs = solve_linear(&vand, &rhs).unwrap().solution.unwrap();
        let t_poly = Poly::new(q, coeffs);
        if !t_poly.gcd(&t_poly.derivative()).is_one() {
            continue;
        }
        let facs = factor(&t_poly);
        if facs.len() == 1 {
            return None;
        }
        // gcd over Q(theta)[z] of Z(z) = z^2 - 2 s theta z + (s^2 theta^2 - a) and m(z)
        let big_z = vec![
            rf.sub(&rf.mul(&st, &st), a),
            rf.scale(&st, &q.from_i64(-2)),
            rf.one(),
        ];
        let m: Vec<ResElem> = facs[0].0.coeffs().iter().map(|c| rf.from_base(c)).collect();
        let g = ext_poly_gcd(rf, big_z, m);
        if g.len() == 2 {
            // monic z - r
            let r = rf.neg(&g[0]);
            return Some(rf.sub(&r, &st));
        }
    }
    None
}

fn norm(rf: &ResidueField, e: &ResElem) -> FieldElem {
    let d = rf.base_degree();
    let mut cols = Vec::with_capacity(d);
    let mut basis = rf.one();
    for _ in 0..d {
        cols.push(rf.coords(&rf.mul(e, &basis)));
        basis = rf.mul(&basis, &rf.theta());
    }
    let rows = (0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    Matrix::new(rf.base(), d, rows).unwrap().determinant().unwrap()
}

fn trim_ext(rf: &ResidueField, mut v: Vec<ResElem>) -> Vec<ResElem> {
    while v.last().is_some_and(|c| rf.is_zero(c)) {
        v.pop();
    }
    v
}

/// Monic gcd of two polynomials with residue-field coefficients.
fn ext_poly_gcd(rf: &ResidueField, a: Vec<ResElem>, b: Vec<ResElem>) -> Vec<ResElem> {
    let mut a = trim_ext(rf, a);
    let mut b = trim_ext(rf, b);
    while !b.is_empty() {
        let inv = rf.inv(b.last().unwrap()).unwrap();
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = rf.mul(a.last().unwrap(), &inv);
            for (j, bc) in b.iter().enumerate() {
                a[shift + j] = rf.sub(&a[shift + j], &rf.mul(&c, bc));
            }
            a = trim_ext(rf, a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(lc) = a.last() {
        let inv = rf.inv(lc).unwrap();
        a = a.iter().map(|c| rf.mul(c, &inv)).collect();
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_in_quadratic_number_field() {
        let q = Field::Rational;
        // Q(i): -1 is a square, 2 is not, 2i = (1+i)^2
        let m = Poly::from_i64s(q, &[1, 0, 1]);
        let r = sqrt_mod_irreducible(&m, &Poly::from_i64s(q, &[-1])).unwrap();
        assert_eq!((&r * &r).rem(&m), Poly::from_i64s(q, &[-1]));
        assert!(sqrt_mod_irreducible(&m, &Poly::from_i64s(q, &[2])).is_none());
        let r = sqrt_mod_irreducible(&m, &Poly::from_i64s(q, &[0, 2])).unwrap();
        assert_eq!((&r * &r).rem(&m), Poly::from_i64s(q, &[0, 2]));
    }

    #[test]
    fn sqrt_where_both_roots_share_a_minimal_polynomial() {
        // Q(sqrt 2): sqrt(2) and -sqrt(2) are conjugate.
        let q = Field::Rational;
        let m = Poly::from_i64s(q, &[-2, 0, 1]);
        let r = sqrt_mod_irreducible(&m, &Poly::from_i64s(q, &[2])).unwrap();
        assert_eq!((&r * &r).rem(&m), Poly::from_i64s(q, &[2]));
    }

    #[test]
    fn sqrt_in_cubic_number_field() {
        let q = Field::Rational;
        let m = Poly::from_i64s(q, &[-2, 0, 0, 1]); // theta^3 = 2
        let b = Poly::from_i64s(q, &[1, 1, 3]);
        let delta = (&b * &b).rem(&m);
        let r = sqrt_mod_irreducible(&m, &delta).unwrap();
        assert_eq!((&r * &r).rem(&m), delta);
        assert!(sqrt_mod_irreducible(&m, &Poly::from_i64s(q, &[0, 1])).is_none());
    }

    #[test]
    fn sqrt_in_fp_extension() {
        let f = Field::Prime(1009);
        let m = Poly::from_i64s(f, &[11, 0, 1]); // x^2 + 11: check irreducible below
        assert!(super::super::factor::is_irreducible(&m));
        let rf = ResidueField::new(m.clone());
        let mut squares = 0;
        for k in 0..40 {
            let delta = Poly::from_i64s(f, &[k, 3]);
            if let Some(r) = sqrt_mod_irreducible(&m, &delta) {
                squares += 1;
                assert_eq!(rf.mul(&rf.from_poly(&r), &rf.from_poly(&r)), rf.from_poly(&delta));
            }
        }
        assert!(squares > 5 && squares < 35);
    }

    #[test]
    fn quadratic_extension_inverse() {
        let q = Field::Rational;
        let rf = ResidueField::with_sqrt(Poly::from_i64s(q, &[-2, 1]), Poly::from_i64s(q, &[33]));
        let z = rf.sqrt_generator().unwrap();
        assert_eq!(rf.mul(&z, &z), rf.from_base(&q.from_i64(33)));
        let e = rf.add(&z, &rf.one());
        assert_eq!(rf.mul(&e, &rf.inv(&e).unwrap()), rf.one());
    }
}

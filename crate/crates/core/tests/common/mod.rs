#![allow(dead_code)]

use hypercert_core::algebra::is_irreducible;
use hypercert_core::{Divisor, Field, FunctionElement, H1Class, HyperellipticCurve, Place, Poly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn curve(field: Field, f: &[i64], hints: &[(i64, i64)]) -> HyperellipticCurve {
    let pts: Vec<_> = hints.iter().map(|&(x, y)| (field.from_i64(x), field.from_i64(y))).collect();
    HyperellipticCurve::new(Poly::from_i64s(field, f)).unwrap().with_hints(&pts).unwrap()
}

/// y^2 = x^5 + 1 over Q.
pub fn g2_q() -> HyperellipticCurve {
    curve(Field::Rational, &[1, 0, 0, 0, 0, 1], &[(0, 1)])
}

/// y^2 = x^5 + x + 3 over F_1009.
pub fn g2_p() -> HyperellipticCurve {
    curve(Field::Prime(1009), &[3, 1, 0, 0, 0, 1], &[])
}

/// y^2 = x^7 + x + 1 over F_1009.
pub fn g3_p() -> HyperellipticCurve {
    curve(Field::Prime(1009), &[1, 1, 0, 0, 0, 0, 0, 1], &[])
}

pub fn curves() -> Vec<(&'static str, HyperellipticCurve)> {
    vec![("g2/Q", g2_q()), ("g2/F1009", g2_p()), ("g3/F1009", g3_p())]
}

/// Rational places plus a few places of degree 2 to 4.
pub fn place_pool(c: &HyperellipticCurve) -> Vec<Place> {
    let field = c.field();
    let mut pool = c.rational_places(8);
    let mut extra = 0;
    for k in 1..40 {
        for p in [Poly::from_i64s(field, &[k, 0, 1]), Poly::from_i64s(field, &[k, 1, 1])] {
            if extra < 4 && is_irreducible(&p) {
                for pl in c.places_above(&p).unwrap() {
                    if pl.degree() <= 4 && !pool.contains(&pl) {
                        pool.push(pl);
                        extra += 1;
                    }
                }
            }
        }
    }
    for b in c.branch_polys() {
        if b.degree().unwrap() <= 4 {
            pool.extend(c.places_above(b).unwrap());
        }
    }
    pool.sort();
    pool.dedup();
    pool
}

/// A divisor of exactly degree `deg`: a few random finite terms, with the
/// balance placed at infinity.
pub fn random_divisor(rng: &mut ChaCha8Rng, pool: &[Place], deg: i64) -> Divisor {
    let mut d = Divisor::zero();
    for _ in 0..rng.gen_range(0..=3) {
        let pl = &pool[rng.gen_range(0..pool.len())];
        if !pl.is_infinite() {
            d.add_place(pl.clone(), rng.gen_range(-2..=2));
        }
    }
    let rest = deg - d.degree();
    d.add_place(Place::Infinity, rest);
    d
}

pub fn random_function(c: &HyperellipticCurve, rng: &mut ChaCha8Rng) -> FunctionElement {
    let field = c.field();
    let mut rp = |max_deg: usize| {
        let d = rng.gen_range(0..=max_deg);
        Poly::new(field, (0..=d).map(|_| field.from_i64(rng.gen_range(-4..=4))).collect())
    };
    loop {
        let (a, b, den) = (rp(4), rp(2), rp(3));
        if !den.is_zero() && !(a.is_zero() && b.is_zero()) {
            return FunctionElement::new(a, b, den).unwrap();
        }
    }
}

/// Up to three random tails below the permitted orders of `ambient`.
pub fn random_class(rng: &mut ChaCha8Rng, c: &HyperellipticCurve, pool: &[Place], ambient: &Divisor) -> H1Class {
    let field = c.field();
    let g = c.genus() as i64;
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let pl = pool[rng.gen_range(0..pool.len())].clone();
        let n = ambient.coeff(&pl);
        let k = -n - rng.gen_range(1..=g + 1);
        terms.push((pl, k, field.from_i64(rng.gen_range(-3..=3))));
    }
    H1Class::new(ambient.clone(), terms)
}

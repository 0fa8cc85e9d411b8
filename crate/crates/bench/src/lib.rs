//! Curves and inputs shared by the benches.

use hypercert_core::{Divisor, Field, HyperellipticCurve, Place, Poly};

/// y^2 = x^5 + 1 over Q with the point (0,1).
pub fn genus_two() -> HyperellipticCurve {
    let c = HyperellipticCurve::new(Poly::from_i64s(Field::Rational, &[1, 0, 0, 0, 0, 1])).unwrap();
    let (x, y) = (Field::Rational.from_i64(0), Field::Rational.from_i64(1));
    c.with_hints(&[(x, y)]).unwrap()
}

/// y^2 = x^7 + x + 1 over F_1009.
pub fn genus_three() -> HyperellipticCurve {
    HyperellipticCurve::new(Poly::from_i64s(Field::Prime(1009), &[1, 1, 0, 0, 0, 0, 0, 1])).unwrap()
}

/// `n * inf` plus one copy of each of the first `k` rational places.
pub fn spread_divisor(c: &HyperellipticCurve, n: i64, k: usize) -> Divisor {
    let mut d = Divisor::place(Place::Infinity, n);
    for p in c.rational_places(k + 1).into_iter().filter(|p| !p.is_infinite()).take(k) {
        d.add_place(p, 1);
    }
    d
}

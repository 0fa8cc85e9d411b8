//! Factorization of univariate polynomials over the base field.
//!
//! Prime fields use squarefree decomposition, distinct-degree splitting and
//! Cantor–Zassenhaus equal-degree splitting. The rationals go through
//! Zassenhaus: factor modulo a small prime, Hensel-lift, recombine.
//! All randomness comes from a fixed-seed generator so results are
//! reproducible.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Field, FieldElem};
use super::poly::Poly;

/// Monic irreducible factors with multiplicities, sorted by [`Poly`]'s order.
/// Constants factor as the empty list.
pub fn factor(f: &Poly) -> Vec<(Poly, u32)> {
    assert!(!f.is_zero(), "factor of the zero polynomial");
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(&f.monic()) {
        let pieces = match f.field() {
            Field::Prime(p) => factor_squarefree_fp(&g, p),
            Field::Rational => factor_squarefree_q(&g),
        };
        out.extend(pieces.into_iter().map(|h| (h, m)));
    }
    out.sort();
    out
}

pub fn is_irreducible(f: &Poly) -> bool {
    matches!(f.degree(), Some(d) if d >= 1) && {
        let fs = factor(f);
        fs.len() == 1 && fs[0].1 == 1
    }
}

/// Squarefree parts `(g_i, i)` with `f = prod g_i^i` (for monic `f`).
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).unwrap();
        if !fac.is_constant() {
            out.push((fac.monic(), i));
        }
        c = c.div_exact(&y).unwrap();
        w = y;
        i += 1;
    }
    if !c.is_constant() {
        // Only reachable in characteristic p: c is a p-th power.
        let p = f.field().characteristic() as usize;
        let root = Poly::new(f.field(), c.coeffs().iter().step_by(p).cloned().collect());
        for (g, m) in squarefree_decomposition(&root.monic()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn big_bits(n: &BigUint) -> Vec<bool> {
    (0..n.bits()).map(|i| n.bit(i)).collect()
}

fn factor_squarefree_fp(f: &Poly, p: u64) -> Vec<Poly> {
    let field = f.field();
    let x = Poly::x(field);
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg_i64() >= 2 * d as i64 {
        h = h.pow_mod(p, &rest);
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            out.extend(equal_degree_split(&g, d, p));
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest);
        }
        d += 1;
    }
    if !rest.is_constant() {
        out.push(rest.monic());
    }
    out
}

fn equal_degree_split(g: &Poly, d: usize, p: u64) -> Vec<Poly> {
    let n = g.degree().unwrap();
    if n == d {
        return vec![g.monic()];
    }
    let field = g.field();
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) >> 1;
    let bits = big_bits(&exp);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ d as u64);
    loop {
        let a = Poly::new(
            field,
            (0..n).map(|_| field.from_i64(rng.gen_range(0..p) as i64)).collect(),
        );
        if a.is_constant() {
            continue;
        }
        let b = &a.pow_mod_bits(&bits, g) - &Poly::one(field);
        let h = b.gcd(g);
        if !h.is_constant() && h.degree() != g.degree() {
            let other = g.div_exact(&h).unwrap();
            let mut out = equal_degree_split(&h, d, p);
            out.extend(equal_degree_split(&other, d, p));
            return out;
        }
    }
}

// ---- rationals -------------------------------------------------------------

type IntPoly = Vec<BigInt>;

fn trim_int(mut v: IntPoly) -> IntPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_int(out)
}

fn int_sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim_int((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn symmetric_mod(v: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m >> 1;
    trim_int(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn content(v: &IntPoly) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive_part(v: &IntPoly) -> IntPoly {
    let c = content(v);
    let mut out: IntPoly = v.iter().map(|x| x / &c).collect();
    if out.last().is_some_and(|l| l.is_negative()) {
        out = out.into_iter().map(|x| -x).collect();
    }
    out
}

fn to_fp(v: &IntPoly, p: u64) -> Poly {
    let field = Field::Prime(p);
    Poly::new(field, v.iter().map(|c| field.from_bigint(c)).collect())
}

fn from_fp(f: &Poly) -> IntPoly {
    f.coeffs()
        .iter()
        .map(|c| match c {
            FieldElem::Fp { v, .. } => BigInt::from(*v),
            FieldElem::Q(_) => unreachable!(),
        })
        .collect()
}

fn to_q(v: &IntPoly) -> Poly {
    let q = Field::Rational;
    Poly::new(q, v.iter().map(|c| q.from_bigint(c)).collect())
}

/// Clears denominators and content of a rational polynomial.
fn integer_primitive(f: &Poly) -> IntPoly {
    let lcm = f
        .coeffs()
        .iter()
        .map(|c| c.as_rational().unwrap().denom().clone())
        .fold(BigInt::one(), |a, b| a.lcm(&b));
    let v: IntPoly = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    primitive_part(&v)
}

fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn factor_squarefree_q(f: &Poly) -> Vec<Poly> {
    if f.degree() == Some(1) {
        return vec![f.monic()];
    }
    let big_f = integer_primitive(f);
    let lc = big_f.last().unwrap().clone();

    // Pick the good prime with the fewest modular factors among a few tries.
    let mut best: Option<(u64, Vec<Poly>)> = None;
    let mut tried = 0;
    for p in odd_primes() {
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = to_fp(&big_f, p);
        if !fp.gcd(&fp.derivative()).is_one() {
            continue;
        }
        let facs = factor_squarefree_fp(&fp.monic(), p);
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, modular) = best.expect("squarefree input has a good prime");
    if modular.len() == 1 {
        return vec![f.monic()];
    }

    let n = big_f.len() - 1;
    let norm2: BigInt = big_f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = lc.abs() * (BigInt::one() << n) * norm2;
    let target = bound * 2;
    let mut modulus = BigInt::from(p);
    let mut steps = 1;
    while modulus <= target {
        modulus *= p;
        steps += 1;
    }

    let lifted: Vec<IntPoly> = (0..modular.len())
        .map(|i| {
            let cof = modular
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Poly::constant(Field::Prime(p).from_bigint(&lc)), |acc, (_, g)| &acc * g);
            hensel_lift(&big_f, &modular[i], &cof, p, steps)
        })
        .collect();

    recombine(big_f, lifted, &modulus)
}

/// Lifts `f = g*h mod p` (g monic) to `f = G*H mod p^steps`, returning `G`.
fn hensel_lift(f: &IntPoly, g: &Poly, h: &Poly, p: u64, steps: u32) -> IntPoly {
    let (one, s, t) = g.xgcd(h);
    debug_assert!(one.is_one());
    let mut gi = from_fp(g);
    let mut hi = from_fp(h);
    let mut m = BigInt::from(p);
    for _ in 1..steps {
        let diff = int_sub(f, &int_mul(&gi, &hi));
        let e: IntPoly = diff.iter().map(|c| c / &m).collect();
        let e = to_fp(&e, p);
        let (q, dg) = (&e * &t).div_rem(g);
        let dh = &(&e * &s) + &(&q * h);
        let dg: IntPoly = from_fp(&dg).into_iter().map(|c| c * &m).collect();
        let dh: IntPoly = from_fp(&dh).into_iter().map(|c| c * &m).collect();
        m *= p;
        gi = symmetric_mod(&int_add(&gi, &dg), &m);
        hi = symmetric_mod(&int_add(&hi, &dh), &m);
    }
    gi
}

fn int_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim_int((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn recombine(mut f: IntPoly, mut factors: Vec<IntPoly>, modulus: &BigInt) -> Vec<Poly> {
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= factors.len() {
        let lc = f.last().unwrap().clone();
        for subset in combinations(factors.len(), size) {
            let prod = subset
                .iter()
                .fold(vec![lc.clone()], |acc, &i| symmetric_mod(&int_mul(&acc, &factors[i]), modulus));
            let cand = primitive_part(&prod);
            let fq = to_q(&f);
            let cq = to_q(&cand);
            let (quot, rem) = fq.div_rem(&cq);
            if rem.is_zero() && quot.coeffs().iter().all(|c| c.as_rational().unwrap().is_integer())
            {
                out.push(cq.monic());
                f = integer_primitive(&quot);
                let mut keep = Vec::new();
                for (i, g) in factors.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                factors = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if f.len() > 1 {
        out.push(to_q(&f).monic());
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

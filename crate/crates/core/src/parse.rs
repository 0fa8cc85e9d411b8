//! Literal syntax for polynomials, places, divisors, tail systems and bundle
//! expressions. Everything printed by `Display` parses back to an equal value.
//!
//! ```text
//! poly    := ['-'] mono (('+'|'-') mono)*        mono := [c ['*']] [x ['^' n]]
//! place   := 'inf' | '(' a ',' b ')' | '[' poly ';' (poly | 'inert') ']'
//! divisor := '0' | ['-'] term (('+'|'-') term)*  term := [n '*'] place
//! class   := '0' | place ':' tail (';' place ':' tail)*
//! tail    := ['-'] [c '*'] 't' ['^' k] (('+'|'-') ...)*
//! bundle  := 'line(' divisor ')' | 'sum(' bundle (',' bundle)* ')'
//!          | 'ext(' name ';' bundle ',' bundle ')'
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::{Field, FieldElem, Poly};
use crate::bundle::BundleExpr;
use crate::cohomology::H1Class;
use crate::curve::{Branch, HyperellipticCurve, Place};
use crate::divisor::Divisor;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Parser<'a> {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        self.err_at(self.pos, msg)
    }

    fn err_at<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => self.err(format!("expected '{c}', found '{got}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(w) {
            let after = self.rest()[w.len()..].chars().next();
            if !after.is_some_and(|c| c.is_alphanumeric() || c == '_') {
                self.pos += w.len();
                return true;
            }
        }
        false
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(self.rest().len());
        if len == 0 || self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return self.err("expected a name");
        }
        let s = self.rest()[..len].to_string();
        self.pos += len;
        Ok(s)
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return None;
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Some(s)
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let neg = self.eat('-');
        let Some(d) = self.digits() else { return self.err("expected an integer") };
        let v: i64 = d.parse().or_else(|_| self.err_at(start, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// Unsigned `n` or `n/d`.
    fn magnitude(&mut self, field: Field) -> Result<Option<FieldElem>> {
        let start = self.pos;
        let Some(num) = self.digits() else { return Ok(None) };
        let num: BigInt = num.parse().unwrap();
        let save = self.pos;
        let den: BigInt = if self.eat('/') {
            match self.digits() {
                Some(d) => d.parse().unwrap(),
                None => {
                    self.pos = save;
                    BigInt::from(1)
                }
            }
        } else {
            BigInt::from(1)
        };
        match field.from_ratio(&num, &den) {
            Ok(v) => Ok(Some(v)),
            Err(e) => self.err_at(start, e.to_string()),
        }
    }

    fn field_elem(&mut self, field: Field) -> Result<FieldElem> {
        let neg = self.eat('-');
        match self.magnitude(field)? {
            Some(v) => Ok(if neg { -v } else { v }),
            None => self.err("expected a number"),
        }
    }

    /// Signed sum of monomials `c * var^k`, as `(k, c)` pairs.
    fn monomials(&mut self, field: Field, var: char) -> Result<Vec<(i64, FieldElem)>> {
        let mut out = Vec::new();
        let mut first = true;
        loop {
            let neg = if first {
                self.eat('-')
            } else if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            first = false;
            let coeff = self.magnitude(field)?;
            let has_var = if coeff.is_some() {
                let save = self.pos;
                if self.eat('*') {
                    if self.peek() == Some(var) {
                        true
                    } else {
                        self.pos = save;
                        return self.err(format!("expected '{var}' after '*'"));
                    }
                } else {
                    self.peek() == Some(var)
                }
            } else {
                self.peek() == Some(var)
            };
            if coeff.is_none() && !has_var {
                return self.err("expected a term");
            }
            let mut k = 0;
            if has_var {
                self.expect(var)?;
                k = if self.eat('^') { self.integer()? } else { 1 };
            }
            let c = coeff.unwrap_or_else(|| field.one());
            out.push((k, if neg { -c } else { c }));
        }
        Ok(out)
    }

    fn poly(&mut self, field: Field) -> Result<Poly> {
        let start = self.pos;
        let mut acc = Poly::zero(field);
        for (k, c) in self.monomials(field, 'x')? {
            if k < 0 {
                return self.err_at(start, "negative exponent in a polynomial");
            }
            acc = &acc + &Poly::monomial(c, k as usize);
        }
        Ok(acc)
    }

    fn place(&mut self, curve: &HyperellipticCurve) -> Result<Place> {
        let field = curve.field();
        let start = self.pos;
        if self.eat_word("inf") {
            return Ok(Place::Infinity);
        }
        let place = if self.eat('(') {
            let a = self.field_elem(field)?;
            self.expect(',')?;
            let b = self.field_elem(field)?;
            self.expect(')')?;
            match curve.point(&a, &b) {
                Ok(p) => p,
                Err(e) => return self.err_at(start, e.to_string()),
            }
        } else if self.eat('[') {
            let p = self.poly(field)?;
            self.expect(';')?;
            let inert = self.eat_word("inert");
            let b = if inert { None } else { Some(self.poly(field)?) };
            self.expect(']')?;
            if p.degree().unwrap_or(0) == 0 {
                return self.err_at(start, "place polynomial must have positive degree");
            }
            let p = p.monic();
            let branch = match b {
                None => Branch::Inert,
                Some(b) => {
                    let b = b.rem(&p);
                    if b.is_zero() {
                        Branch::Ramified
                    } else {
                        Branch::Split(b)
                    }
                }
            };
            Place::Finite { p, branch }
        } else {
            return self.err("expected a place: inf, (a,b) or [p(x); b(x)]");
        };
        if let Err(e) = curve.validate_place(&place) {
            return self.err_at(start, e.to_string());
        }
        Ok(place)
    }

    fn divisor(&mut self, curve: &HyperellipticCurve) -> Result<Divisor> {
        let save = self.pos;
        if self.eat('0') && !self.peek().is_some_and(|c| c.is_ascii_digit() || c == '*') {
            return Ok(Divisor::zero());
        }
        self.pos = save;
        let mut d = Divisor::zero();
        let mut first = true;
        loop {
            let neg = if first {
                self.eat('-')
            } else if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            first = false;
            let save = self.pos;
            let n = match self.digits() {
                Some(ds) => {
                    let n: i64 = ds.parse().or_else(|_| self.err_at(save, "multiplicity out of range"))?;
                    self.expect('*')?;
                    n
                }
                None => 1,
            };
            let pl = self.place(curve)?;
            d.add_place(pl, if neg { -n } else { n });
        }
        Ok(d)
    }

    fn class(&mut self, curve: &HyperellipticCurve, ambient: &Divisor) -> Result<H1Class> {
        if self.eat('0') {
            return Ok(H1Class::zero(ambient.clone()));
        }
        let mut terms = Vec::new();
        loop {
            let pl = self.place(curve)?;
            self.expect(':')?;
            let start = self.pos;
            let tail = self.monomials(curve.field(), 't')?;
            if tail.is_empty() {
                return self.err_at(start, "empty tail");
            }
            terms.extend(tail.into_iter().map(|(k, c)| (pl.clone(), k, c)));
            if !self.eat(';') {
                break;
            }
        }
        Ok(H1Class::new(ambient.clone(), terms))
    }

    fn bundle(&mut self, curve: &HyperellipticCurve, classes: &BTreeMap<String, H1Class>) -> Result<BundleExpr> {
        let start = self.pos;
        if self.eat_word("line") {
            self.expect('(')?;
            let d = self.divisor(curve)?;
            self.expect(')')?;
            Ok(BundleExpr::line(d))
        } else if self.eat_word("sum") {
            self.expect('(')?;
            let mut parts = vec![self.bundle(curve, classes)?];
            while self.eat(',') {
                parts.push(self.bundle(curve, classes)?);
            }
            self.expect(')')?;
            BundleExpr::sum(parts)
        } else if self.eat_word("ext") {
            self.expect('(')?;
            let name_at = self.pos;
            let name = self.ident()?;
            let Some(class) = classes.get(&name) else {
                return self.err_at(name_at, format!("unknown class '{name}'"));
            };
            self.expect(';')?;
            let sub = self.bundle(curve, classes)?;
            self.expect(',')?;
            let quot = self.bundle(curve, classes)?;
            self.expect(')')?;
            BundleExpr::ext(&name, class.clone(), sub, quot).or_else(|e| self.err_at(start, e.to_string()))
        } else {
            self.err("expected line(...), sum(...) or ext(...)")
        }
    }
}

pub fn parse_field_elem(field: Field, s: &str) -> Result<FieldElem> {
    let mut p = Parser::new(s);
    let v = p.field_elem(field)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_poly(field: Field, s: &str) -> Result<Poly> {
    let mut p = Parser::new(s);
    let v = p.poly(field)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_place(curve: &HyperellipticCurve, s: &str) -> Result<Place> {
    let mut p = Parser::new(s);
    let v = p.place(curve)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_divisor(curve: &HyperellipticCurve, s: &str) -> Result<Divisor> {
    let mut p = Parser::new(s);
    let v = p.divisor(curve)?;
    p.finish()?;
    Ok(v)
}

/// A tail system over `ambient`.
pub fn parse_class(curve: &HyperellipticCurve, ambient: &Divisor, s: &str) -> Result<H1Class> {
    let mut p = Parser::new(s);
    let v = p.class(curve, ambient)?;
    p.finish()?;
    Ok(v)
}

/// A bundle expression whose `ext` nodes name classes in `classes`.
pub fn parse_bundle(
    curve: &HyperellipticCurve,
    classes: &BTreeMap<String, H1Class>,
    s: &str,
) -> Result<BundleExpr> {
    let mut p = Parser::new(s);
    let v = p.bundle(curve, classes)?;
    p.finish()?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn g2() -> HyperellipticCurve {
        HyperellipticCurve::new(Poly::from_i64s(Q, &[1, 0, 0, 0, 0, 1])).unwrap()
    }

    #[test]
    fn polynomials() {
        assert_eq!(parse_poly(Q, "x^4 - x^3 + x^2 - x + 1").unwrap(), Poly::from_i64s(Q, &[1, -1, 1, -1, 1]));
        assert_eq!(parse_poly(Q, "-x").unwrap(), Poly::from_i64s(Q, &[0, -1]));
        assert_eq!(parse_poly(Q, "1/2*x^2+3").unwrap().to_string(), "1/2*x^2 + 3");
        assert_eq!(parse_poly(Q, "2x").unwrap().to_string(), "2*x");
        assert!(parse_poly(Q, "x^").is_err());
        assert!(parse_poly(Q, "x + + 1").is_err());
    }

    #[test]
    fn places_and_divisors() {
        let c = g2();
        let d = parse_divisor(&c, "(0,-1) + 1*(0,1)").unwrap();
        assert_eq!(d.degree(), 2);
        assert_eq!(parse_divisor(&c, "2*inf").unwrap(), Divisor::place(Place::Infinity, 2));
        assert_eq!(parse_divisor(&c, " 0 ").unwrap(), Divisor::zero());
        let w = parse_divisor(&c, "[x^4-x^3+x^2-x+1; 0]").unwrap();
        assert_eq!(w.degree(), 4);
        let neg = parse_divisor(&c, "-(0,-1)").unwrap();
        assert_eq!(neg.degree(), -1);
        let inert = parse_place(&c, "[x - 2; inert]").unwrap();
        assert_eq!(inert.degree(), 2);
        assert_eq!(parse_place(&c, "(-1,0)").unwrap().to_string(), "(-1,0)");
    }

    #[test]
    fn errors_carry_positions() {
        let c = g2();
        match parse_divisor(&c, "(0,1) + (1,1)") {
            Err(Error::Parse { line: 1, col: 9, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_divisor(&c, "2*inf +\n  3*foo") {
            Err(Error::Parse { line: 2, col: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_place(&c, "[x^2 - 1; x]").is_err());
        assert!(parse_place(&c, "[x - 2; 3]").is_err());
    }

    #[test]
    fn classes_and_bundles() {
        let c = g2();
        let dr = parse_divisor(&c, "(0,-1)").unwrap();
        let theta = parse_class(&c, &dr, "(0,-1): 1*t^-2").unwrap();
        assert_eq!(theta.to_string(), "(0,-1): 1*t^-2");
        assert_eq!(parse_class(&c, &dr, "(0,-1): t^-2").unwrap(), theta);
        assert!(parse_class(&c, &dr, "(0,-1): t^-1").unwrap().is_trivially_zero());
        let two = parse_class(&c, &Divisor::zero(), "(0,1): -3*t^-1 + t^-2; inf: 1/2*t^-1").unwrap();
        assert_eq!(parse_class(&c, &Divisor::zero(), &two.to_string()).unwrap(), two);
        let classes = BTreeMap::from([("theta".to_string(), theta)]);
        let s = "sum(line((0,1)), ext(theta; line(0), line(-(0,-1))))";
        let b = parse_bundle(&c, &classes, s).unwrap();
        assert_eq!(b.to_string(), s);
        assert_eq!((b.rank(), b.degree()), (3, 0));
        assert!(parse_bundle(&c, &classes, "ext(nope; line(0), line(0))").is_err());
        assert!(parse_bundle(&c, &classes, "ext(theta; line(0), line(0))").is_err());
    }

    #[test]
    fn prime_field_literals() {
        let c = HyperellipticCurve::new(Poly::from_i64s(Field::Prime(1009), &[1, 1, 0, 0, 0, 0, 0, 1])).unwrap();
        let p = parse_place(&c, "(0,-1)").unwrap();
        assert_eq!(p.to_string(), "(0,1008)");
        assert_eq!(parse_place(&c, &p.to_string()).unwrap(), p);
        assert_eq!(parse_field_elem(Field::Prime(7), "1/2").unwrap(), Field::Prime(7).from_i64(4));
        assert!(parse_field_elem(Field::Prime(7), "1/7").is_err());
    }
}

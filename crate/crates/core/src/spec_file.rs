//! Curve description files.
//!
//! ```toml
//! field = "Q"            # or "Fp:1009"
//! f = [1, 0, 0, 0, 0, 1] # ascending coefficients; integers or "a/b" strings
//! hints = [[0, 1]]       # optional rational points
//! seed = 0               # optional
//! ```

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, FieldElem, Poly};
use crate::curve::HyperellipticCurve;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Int(i64),
    Text(String),
}

impl Literal {
    fn elem(&self, field: Field) -> Result<FieldElem> {
        match self {
            Literal::Int(n) => Ok(field.from_i64(*n)),
            Literal::Text(s) => field.parse_elem(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub field: String,
    pub f: Vec<Literal>,
    #[serde(default)]
    pub hints: Vec<[Literal; 2]>,
    #[serde(default)]
    pub seed: Option<u64>,
}

pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    if s == "Q" {
        return Ok(Field::Rational);
    }
    match s.strip_prefix("Fp:").map(|p| p.trim().parse::<u64>()) {
        Some(Ok(p)) => Field::prime(p),
        _ => Err(Error::InvalidField(format!("expected \"Q\" or \"Fp:<prime>\", got {s:?}"))),
    }
}

impl CurveSpec {
    pub fn from_toml(text: &str) -> Result<CurveSpec> {
        toml::from_str(text).map_err(|e| {
            let (line, col) = e
                .span()
                .map(|sp| {
                    let before = &text[..sp.start.min(text.len())];
                    let line = before.matches('\n').count() + 1;
                    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
                    (line, col)
                })
                .unwrap_or((1, 1));
            Error::Parse { line, col, msg: e.message().to_string() }
        })
    }

    pub fn load(path: &std::path::Path) -> Result<CurveSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        CurveSpec::from_toml(&text)
    }

    /// Validates the field, `f` and every hint.
    pub fn curve(&self) -> Result<HyperellipticCurve> {
        let field = parse_field(&self.field)?;
        let coeffs = self.f.iter().map(|c| c.elem(field)).collect::<Result<Vec<_>>>()?;
        let curve = HyperellipticCurve::new(Poly::new(field, coeffs))?;
        let hints = self
            .hints
            .iter()
            .map(|[x, y]| Ok((x.elem(field)?, y.elem(field)?)))
            .collect::<Result<Vec<_>>>()?;
        curve.with_hints(&hints)
    }

    pub fn from_curve(curve: &HyperellipticCurve, seed: Option<u64>) -> CurveSpec {
        let text = |c: &FieldElem| Literal::Text(c.to_string());
        CurveSpec {
            field: curve.field().to_string(),
            f: curve.f().coeffs().iter().map(text).collect(),
            hints: curve
                .hints()
                .iter()
                .filter_map(|p| p.coordinates())
                .map(|(x, y)| [text(&x), text(&y)])
                .collect(),
            seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_the_genus_two_example() {
        let spec = CurveSpec::from_toml("field = \"Q\"\nf = [1, 0, 0, 0, 0, 1]\nhints = [[0, 1]]\nseed = 0\n").unwrap();
        let c = spec.curve().unwrap();
        assert_eq!(c.genus(), 2);
        assert_eq!(c.hints()[0].to_string(), "(0,1)");
        assert_eq!(spec.seed, Some(0));
        let back = CurveSpec::from_curve(&c, Some(0));
        assert_eq!(back.curve().unwrap().f(), c.f());
    }

    #[test]
    fn string_coefficients_and_prime_fields() {
        let spec = CurveSpec::from_toml("field = \"Fp:1009\"\nf = [\"1\", 1, 0, 0, 0, 0, 0, \"1\"]").unwrap();
        let c = spec.curve().unwrap();
        assert_eq!(c.genus(), 3);
        assert_eq!(c.field(), Field::Prime(1009));
    }

    #[test]
    fn rejections() {
        let bad = |s: &str| CurveSpec::from_toml(s).and_then(|sp| sp.curve()).unwrap_err();
        assert!(matches!(bad("field = \"Q\"\nf = [1, 0, 0, 1]"), Error::InvalidCurve(_)));
        assert!(matches!(bad("field = \"Fp:2\"\nf = [1, 0, 0, 0, 0, 1]"), Error::InvalidField(_)));
        assert!(matches!(bad("field = \"Fp:9\"\nf = [1, 0, 0, 0, 0, 1]"), Error::InvalidField(_)));
        assert!(matches!(bad("field = \"R\"\nf = [1, 0, 0, 0, 0, 1]"), Error::InvalidField(_)));
        assert!(matches!(bad("field = \"Q\"\nf = [1, 0, 0, 0, 0, 1]\nhints = [[0, 2]]"), Error::InvalidCurve(_)));
        assert!(matches!(bad("field = \"Q\"\nf = [1, 0, 0, 0, 0, 1"), Error::Parse { .. }));
        assert!(matches!(bad("field = \"Q\"\nf = [1, 0, 0, 0, 0, 1]\ncolour = 3"), Error::Parse { line: 3, .. }));
    }
}

//! Symbolic vector bundles and the flatness rules R1–R6.
//!
//! Rules, tried in order at every node:
//! - R1: nonzero degree gives NotFlat.
//! - R2: a degree-0 line bundle is Flat.
//! - R3: a direct sum with a NotFlat summand is NotFlat.
//! - R4: a direct sum of Flat summands is Flat.
//! - R5: a split extension has the verdict of the direct sum.
//! - R6: a non-split rank-2 extension of degree 0 whose subbundle has
//!   positive degree is indecomposable, hence Flat.

use std::fmt;

use serde::Serialize;

use crate::cohomology::{is_zero_class, H1Class};
use crate::curve::HyperellipticCurve;
use crate::divisor::Divisor;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleExpr {
    Line(Divisor),
    Sum(Vec<BundleExpr>),
    /// `0 -> sub -> E -> quot -> 0` with class in `H^1(O(A - B))` for
    /// `sub = O(A)`, `quot = O(B)`.
    Ext { label: String, class: H1Class, sub: Box<BundleExpr>, quot: Box<BundleExpr> },
}

impl BundleExpr {
    pub fn line(d: Divisor) -> BundleExpr {
        BundleExpr::Line(d)
    }

    pub fn sum(parts: Vec<BundleExpr>) -> Result<BundleExpr> {
        if parts.is_empty() {
            return Err(Error::Contract("empty direct sum".into()));
        }
        Ok(BundleExpr::Sum(parts))
    }

    /// Only line-by-line extensions are representable.
    pub fn ext(label: &str, class: H1Class, sub: BundleExpr, quot: BundleExpr) -> Result<BundleExpr> {
        let (BundleExpr::Line(a), BundleExpr::Line(b)) = (&sub, &quot) else {
            return Err(Error::Contract("extensions must be of a line bundle by a line bundle".into()));
        };
        let hom = a - b;
        if class.ambient() != &hom {
            return Err(Error::Contract(format!(
                "extension class lives over {} but Hom(quot, sub) is O({hom})",
                class.ambient()
            )));
        }
        Ok(BundleExpr::Ext { label: label.to_string(), class, sub: Box::new(sub), quot: Box::new(quot) })
    }

    pub fn rank(&self) -> usize {
        match self {
            BundleExpr::Line(_) => 1,
            BundleExpr::Sum(parts) => parts.iter().map(BundleExpr::rank).sum(),
            BundleExpr::Ext { sub, quot, .. } => sub.rank() + quot.rank(),
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            BundleExpr::Line(d) => d.degree(),
            BundleExpr::Sum(parts) => parts.iter().map(BundleExpr::degree).sum(),
            BundleExpr::Ext { sub, quot, .. } => sub.degree() + quot.degree(),
        }
    }

    /// A divisor representing the class of the top exterior power.
    pub fn determinant(&self) -> Divisor {
        match self {
            BundleExpr::Line(d) => d.clone(),
            BundleExpr::Sum(parts) => parts.iter().fold(Divisor::zero(), |acc, p| &acc + &p.determinant()),
            BundleExpr::Ext { sub, quot, .. } => &sub.determinant() + &quot.determinant(),
        }
    }

    pub fn is_split(&self, curve: &HyperellipticCurve) -> Result<bool> {
        match self {
            BundleExpr::Ext { class, .. } => Ok(is_zero_class(curve, class)?.is_zero),
            _ => Err(Error::Contract("is_split needs an extension".into())),
        }
    }

    /// The node at a trace path such as `$.1.sub` or `$.split.0`.
    pub fn at(&self, path: &str) -> Option<BundleExpr> {
        let mut segs = path.split('.');
        if segs.next() != Some("$") {
            return None;
        }
        let mut node = self.clone();
        for seg in segs {
            node = match (&node, seg) {
                (BundleExpr::Ext { sub, .. }, "sub") => (**sub).clone(),
                (BundleExpr::Ext { quot, .. }, "quot") => (**quot).clone(),
                (BundleExpr::Ext { sub, quot, .. }, "split") => {
                    BundleExpr::Sum(vec![(**sub).clone(), (**quot).clone()])
                }
                (BundleExpr::Sum(parts), i) => parts.get(i.parse::<usize>().ok()?)?.clone(),
                _ => return None,
            };
        }
        Some(node)
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleExpr::Line(d) => write!(f, "line({d})"),
            BundleExpr::Sum(parts) => {
                write!(f, "sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            BundleExpr::Ext { label, sub, quot, .. } => write!(f, "ext({label}; {sub}, {quot})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Flat,
    NotFlat,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl Rule {
    pub fn description(self) -> &'static str {
        match self {
            Rule::R1 => "degree obstruction: a flat bundle has degree 0",
            Rule::R2 => "a line bundle of degree 0 is flat",
            Rule::R3 => "a direct summand that is not flat obstructs flatness",
            Rule::R4 => "a direct sum of flat bundles is flat",
            Rule::R5 => "a split extension is the direct sum of its pieces",
            Rule::R6 => {
                "a non-split extension of degree 0 with a positive-degree line subbundle is indecomposable, hence flat"
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Fact {
    Degree { path: String, value: i64 },
    Rank { path: String, value: usize },
    ClassIsZero { path: String, value: bool },
    Verdict { path: String, value: Verdict },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub path: String,
    pub rule: Rule,
    pub facts: Vec<Fact>,
    pub conclusion: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatnessVerdict {
    pub verdict: Verdict,
    pub trace: Vec<TraceStep>,
    pub reason: Option<String>,
}

pub const ROOT: &str = "$";

pub fn is_flat(curve: &HyperellipticCurve, b: &BundleExpr) -> Result<FlatnessVerdict> {
    let mut trace = Vec::new();
    let verdict = decide(curve, b, ROOT, &mut trace)?;
    let reason = (verdict == Verdict::Unknown).then(|| "no rule applies".to_string());
    Ok(FlatnessVerdict { verdict, trace, reason })
}

fn decide(curve: &HyperellipticCurve, b: &BundleExpr, path: &str, trace: &mut Vec<TraceStep>) -> Result<Verdict> {
    let deg = b.degree();
    let step = |rule, facts, conclusion| TraceStep { path: path.to_string(), rule, facts, conclusion };
    let degree_fact = Fact::Degree { path: path.to_string(), value: deg };
    if deg != 0 {
        trace.push(step(Rule::R1, vec![degree_fact], Verdict::NotFlat));
        return Ok(Verdict::NotFlat);
    }
    match b {
        BundleExpr::Line(_) => {
            trace.push(step(Rule::R2, vec![Fact::Rank { path: path.into(), value: 1 }, degree_fact], Verdict::Flat));
            Ok(Verdict::Flat)
        }
        BundleExpr::Sum(parts) => {
            let mut verdicts = Vec::new();
            for (i, p) in parts.iter().enumerate() {
                let child = format!("{path}.{i}");
                verdicts.push((child.clone(), decide(curve, p, &child, trace)?));
            }
            if let Some((child, _)) = verdicts.iter().find(|(_, v)| *v == Verdict::NotFlat) {
                let facts = vec![Fact::Verdict { path: child.clone(), value: Verdict::NotFlat }];
                trace.push(step(Rule::R3, facts, Verdict::NotFlat));
                return Ok(Verdict::NotFlat);
            }
            if verdicts.iter().all(|(_, v)| *v == Verdict::Flat) {
                let facts = verdicts.into_iter().map(|(p, v)| Fact::Verdict { path: p, value: v }).collect();
                trace.push(step(Rule::R4, facts, Verdict::Flat));
                return Ok(Verdict::Flat);
            }
            Ok(Verdict::Unknown)
        }
        BundleExpr::Ext { class, sub, .. } => {
            let zero = is_zero_class(curve, class)?.is_zero;
            let class_fact = Fact::ClassIsZero { path: path.into(), value: zero };
            if zero {
                let split = format!("{path}.split");
                let v = decide(curve, &b.at_local("split"), &split, trace)?;
                if v != Verdict::Unknown {
                    trace.push(step(Rule::R5, vec![class_fact, Fact::Verdict { path: split, value: v }], v));
                }
                return Ok(v);
            }
            let sub_deg = sub.degree();
            if b.rank() == 2 && sub_deg > 0 {
                let facts = vec![
                    class_fact,
                    Fact::Rank { path: path.into(), value: 2 },
                    degree_fact,
                    Fact::Degree { path: format!("{path}.sub"), value: sub_deg },
                ];
                trace.push(step(Rule::R6, facts, Verdict::Flat));
                return Ok(Verdict::Flat);
            }
            Ok(Verdict::Unknown)
        }
    }
}

impl BundleExpr {
    fn at_local(&self, seg: &str) -> BundleExpr {
        self.at(&format!("{ROOT}.{seg}")).expect("valid segment")
    }
}

/// Re-derives the verdict from a trace, recomputing every fact from `b`.
pub fn replay(curve: &HyperellipticCurve, b: &BundleExpr, trace: &[TraceStep]) -> Result<Verdict> {
    let mut concluded: Vec<(String, Verdict)> = Vec::new();
    let bad = |msg: String| Err(Error::Contract(format!("trace replay: {msg}")));
    for st in trace {
        let Some(node) = b.at(&st.path) else { return bad(format!("no node at {}", st.path)) };
        for fact in &st.facts {
            let ok = match fact {
                Fact::Degree { path, value } => b.at(path).map(|n| n.degree()) == Some(*value),
                Fact::Rank { path, value } => b.at(path).map(|n| n.rank()) == Some(*value),
                Fact::ClassIsZero { path, value } => match b.at(path) {
                    Some(BundleExpr::Ext { class, .. }) => is_zero_class(curve, &class)?.is_zero == *value,
                    _ => false,
                },
                Fact::Verdict { path, value } => concluded.iter().any(|(p, v)| p == path && v == value),
            };
            if !ok {
                return bad(format!("fact {fact:?} does not hold"));
            }
        }
        let has = |pred: &dyn Fn(&Fact) -> bool| st.facts.iter().any(pred);
        let here = |p: &String| p == &st.path;
        let derived = match st.rule {
            Rule::R1 => has(&|f| matches!(f, Fact::Degree { path, value } if here(path) && *value != 0))
                .then_some(Verdict::NotFlat),
            Rule::R2 => (matches!(node, BundleExpr::Line(_))
                && has(&|f| matches!(f, Fact::Degree { path, value: 0 } if here(path))))
            .then_some(Verdict::Flat),
            Rule::R3 => match &node {
                BundleExpr::Sum(parts) => has(&|f| {
                    matches!(f, Fact::Verdict { path, value: Verdict::NotFlat }
                        if is_child(&st.path, path, parts.len()))
                })
                .then_some(Verdict::NotFlat),
                _ => None,
            },
            Rule::R4 => match &node {
                BundleExpr::Sum(parts) => (0..parts.len())
                    .all(|i| {
                        let child = format!("{}.{i}", st.path);
                        has(&|f| matches!(f, Fact::Verdict { path, value: Verdict::Flat } if *path == child))
                    })
                    .then_some(Verdict::Flat),
                _ => None,
            },
            Rule::R5 => {
                let split = format!("{}.split", st.path);
                let zero = has(&|f| matches!(f, Fact::ClassIsZero { path, value: true } if here(path)));
                st.facts
                    .iter()
                    .find_map(|f| match f {
                        Fact::Verdict { path, value } if *path == split => Some(*value),
                        _ => None,
                    })
                    .filter(|_| zero)
            }
            Rule::R6 => {
                let sub = format!("{}.sub", st.path);
                (matches!(node, BundleExpr::Ext { .. })
                    && has(&|f| matches!(f, Fact::ClassIsZero { path, value: false } if here(path)))
                    && has(&|f| matches!(f, Fact::Rank { path, value: 2 } if here(path)))
                    && has(&|f| matches!(f, Fact::Degree { path, value: 0 } if here(path)))
                    && has(&|f| matches!(f, Fact::Degree { path, value } if *path == sub && *value > 0)))
                .then_some(Verdict::Flat)
            }
        };
        if derived != Some(st.conclusion) {
            return bad(format!("rule {:?} at {} does not yield {:?}", st.rule, st.path, st.conclusion));
        }
        concluded.push((st.path.clone(), st.conclusion));
    }
    Ok(concluded.iter().rev().find(|(p, _)| p == ROOT).map_or(Verdict::Unknown, |(_, v)| *v))
}

fn is_child(parent: &str, path: &str, n: usize) -> bool {
    path.strip_prefix(parent)
        .and_then(|r| r.strip_prefix('.'))
        .and_then(|r| r.parse::<usize>().ok())
        .is_some_and(|i| i < n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Poly};
    use crate::curve::Place;

    const Q: Field = Field::Rational;

    fn g2() -> HyperellipticCurve {
        HyperellipticCurve::new(Poly::from_i64s(Q, &[1, 0, 0, 0, 0, 1])).unwrap()
    }

    fn pt(c: &HyperellipticCurve, x: i64, y: i64) -> Place {
        c.point(&c.field().from_i64(x), &c.field().from_i64(y)).unwrap()
    }

    struct Instance {
        curve: HyperellipticCurve,
        p: Divisor,
        dr: Divisor,
        theta: H1Class,
    }

    fn instance() -> Instance {
        let curve = g2();
        let p = Divisor::place(pt(&curve, 0, 1), 1);
        let q = pt(&curve, 0, -1);
        let dr = Divisor::place(q.clone(), 1);
        let theta = H1Class::single(dr.clone(), q, -2, Q.one());
        Instance { curve, p, dr, theta }
    }

    #[test]
    fn the_three_verdicts() {
        let Instance { curve, p, dr, theta } = instance();
        let v = BundleExpr::ext("theta", theta.clone(), BundleExpr::line(Divisor::zero()), BundleExpr::line(-&dr))
            .unwrap();
        assert_eq!(v.degree(), -1);
        assert!(!v.is_split(&curve).unwrap());
        let e = BundleExpr::sum(vec![BundleExpr::line(p.clone()), v.clone()]).unwrap();
        assert_eq!((e.rank(), e.degree()), (3, 0));
        let fe = is_flat(&curve, &e).unwrap();
        assert_eq!(fe.verdict, Verdict::NotFlat);
        let last = fe.trace.last().unwrap();
        assert_eq!(last.rule, Rule::R3);
        assert_eq!(last.facts, vec![Fact::Verdict { path: "$.0".into(), value: Verdict::NotFlat }]);
        assert_eq!(replay(&curve, &e, &fe.trace).unwrap(), Verdict::NotFlat);

        let omega = crate::cohomology::push_forward(&theta, &(&p + &dr)).unwrap();
        let q = BundleExpr::ext("omega", omega, BundleExpr::line(p.clone()), BundleExpr::line(-&dr)).unwrap();
        let fq = is_flat(&curve, &q).unwrap();
        assert_eq!(fq.verdict, Verdict::Flat);
        assert_eq!(fq.trace.last().unwrap().rule, Rule::R6);
        assert_eq!(replay(&curve, &q, &fq.trace).unwrap(), Verdict::Flat);
        assert_eq!(q.determinant(), &p - &dr);

        let f = BundleExpr::line(Divisor::zero());
        assert_eq!(is_flat(&curve, &f).unwrap().verdict, Verdict::Flat);
        let l = BundleExpr::line(&p - &Divisor::place(Place::Infinity, 1));
        let fl = is_flat(&curve, &l).unwrap();
        assert_eq!((fl.verdict, fl.trace[0].rule), (Verdict::Flat, Rule::R2));
    }

    #[test]
    fn zero_class_reduces_to_sum() {
        let Instance { curve, p, dr, theta } = instance();
        let zero = H1Class::zero(&p + &dr);
        let q = BundleExpr::ext("omega", zero, BundleExpr::line(p.clone()), BundleExpr::line(-&dr)).unwrap();
        assert!(q.is_split(&curve).unwrap());
        let fq = is_flat(&curve, &q).unwrap();
        assert_eq!(fq.verdict, Verdict::NotFlat);
        assert_eq!(fq.trace.last().unwrap().rule, Rule::R5);
        assert_eq!(replay(&curve, &q, &fq.trace).unwrap(), Verdict::NotFlat);
        let _ = theta;
    }

    #[test]
    fn rule_gap_is_unknown() {
        let Instance { curve, p, .. } = instance();
        // Ext of O(P) by O(-P): class over -2P; any tail of order <= 1 at P
        let pl = p.support()[0].clone();
        let class = H1Class::single(p.scale(-2), pl.clone(), 1, Q.one());
        assert!(!is_zero_class(&curve, &class).unwrap().is_zero);
        let b = BundleExpr::ext("c", class, BundleExpr::line(-&p), BundleExpr::line(p.clone())).unwrap();
        let fb = is_flat(&curve, &b).unwrap();
        assert_eq!(fb.verdict, Verdict::Unknown);
        assert_eq!(fb.reason.as_deref(), Some("no rule applies"));
        assert!(fb.trace.is_empty());
        assert_eq!(replay(&curve, &b, &fb.trace).unwrap(), Verdict::Unknown);
    }

    #[test]
    fn ext_requires_matching_ambient() {
        let Instance { p, dr, theta, .. } = instance();
        assert!(BundleExpr::ext("t", theta, BundleExpr::line(p), BundleExpr::line(-&dr)).is_err());
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let Instance { curve, p, dr, theta } = instance();
        let v = BundleExpr::ext("theta", theta, BundleExpr::line(Divisor::zero()), BundleExpr::line(-&dr)).unwrap();
        let e = BundleExpr::sum(vec![BundleExpr::line(p), v]).unwrap();
        let mut tr = is_flat(&curve, &e).unwrap().trace;
        tr.last_mut().unwrap().conclusion = Verdict::Flat;
        assert!(replay(&curve, &e, &tr).is_err());
        let mut tr = is_flat(&curve, &e).unwrap().trace;
        tr[0].facts = vec![Fact::Degree { path: "$.0".into(), value: 2 }];
        assert!(replay(&curve, &e, &tr).is_err());
    }
}

//! Certificates: every claim of the construction recorded with its inputs,
//! witnesses and outcome, plus an independent checker.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::Field;
use crate::bundle::{is_flat, replay, BundleExpr, FlatnessVerdict, Rule, Verdict, ROOT};
use crate::cohomology::{h1_dim_via_corank, is_zero_class, push_forward};
use crate::construction::ConstructionData;
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::parse::{parse_class, parse_divisor, parse_place};
use crate::riemann_roch::{h0, h1, is_linearly_equivalent};
use crate::spec_file::{CurveSpec, Literal};

pub const VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub field: String,
    pub f: Vec<String>,
    pub genus: usize,
    pub hints: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub over: String,
    pub tails: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionRecord {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "D_Q")]
    pub d_q: String,
    #[serde(rename = "D_R")]
    pub d_r: String,
    pub theta: ClassRecord,
    pub omega: ClassRecord,
    pub bundles: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check_id: String,
    pub statement: String,
    pub paper_anchor: String,
    pub inputs: BTreeMap<String, Value>,
    pub witnesses: BTreeMap<String, Value>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub curve: CurveRecord,
    pub seed: u64,
    pub semantics: String,
    pub construction: ConstructionRecord,
    pub checks: Vec<Check>,
    pub overall_pass: bool,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check_id == id)
    }
}

fn semantics(field: Field) -> String {
    match field {
        Field::Rational => {
            "exact computation over Q; flatness verdicts apply the Atiyah-Weil rules to the complexified curve".into()
        }
        Field::Prime(p) => format!(
            "exact computation over F_{p}; each verdict asserts only that the algebraic preconditions of the cited rule hold, not an analytic statement"
        ),
    }
}

type Map = BTreeMap<String, Value>;

fn map(v: Value) -> Map {
    match v {
        Value::Object(m) => m.into_iter().collect(),
        _ => Map::new(),
    }
}

struct Outcome {
    witnesses: Map,
    pass: bool,
}

fn outcome(pass: bool, witnesses: Value) -> Result<Outcome> {
    Ok(Outcome { witnesses: map(witnesses), pass })
}

fn record(id: &str, statement: &str, anchor: &str, inputs: Value, run: impl FnOnce() -> Result<Outcome>) -> Check {
    let (witnesses, pass) = match run() {
        Ok(o) => (o.witnesses, o.pass),
        Err(e) => (map(json!({ "error": e.to_string() })), false),
    };
    Check {
        check_id: id.into(),
        statement: statement.into(),
        paper_anchor: anchor.into(),
        inputs: map(inputs),
        witnesses,
        pass,
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Flat => "Flat",
        Verdict::NotFlat => "NotFlat",
        Verdict::Unknown => "Unknown",
    }
}

fn root_rule(fv: &FlatnessVerdict) -> Option<Rule> {
    fv.trace.iter().rev().find(|s| s.path == ROOT).map(|s| s.rule)
}

fn flatness_witnesses(data: &ConstructionData, b: &BundleExpr, fv: &FlatnessVerdict) -> Result<(Map, Verdict)> {
    let replayed = replay(&data.curve, b, &fv.trace)?;
    let w = json!({
        "verdict": verdict_name(fv.verdict),
        "root_rule": root_rule(fv).map(|r| format!("{r:?}")),
        "trace": serde_json::to_value(&fv.trace).expect("trace serializes"),
        "replayed_verdict": verdict_name(replayed),
    });
    Ok((map(w), replayed))
}

/// Evaluates every claim on `data`. Failures are recorded, never raised.
pub fn verify(data: &ConstructionData) -> Certificate {
    let curve = &data.curve;
    let g = curve.genus() as i64;
    let k = curve.canonical_divisor();
    let p_div = Divisor::place(data.p.clone(), 1);
    let dqr = &data.d_q + &data.d_r;
    let big = &p_div + &dqr;
    let s = |d: &Divisor| d.to_string();
    let mut checks = Vec::new();

    checks.push(record(
        "C1",
        "K ~ P + D, deg P = 1 and P is not in supp(D)",
        "decomposition of the canonical class",
        json!({ "K": s(&k), "P": data.p.to_string(), "D": s(&data.d) }),
        || {
            let target = &p_div + &data.d;
            let h = is_linearly_equivalent(curve, &k, &target)?;
            let div_h = match &h {
                Some(h) => Some(s(&curve.divisor_of(h)?)),
                None => None,
            };
            let deg_p = data.p.degree();
            let in_supp = data.d.coeff(&data.p) != 0;
            let effective = data.d.is_effective() || data.d.is_zero();
            outcome(
                h.is_some() && deg_p == 1 && !in_supp && effective,
                json!({
                    "h": h.map(|h| h.to_string()),
                    "div_h": div_h,
                    "deg_P": deg_p,
                    "P_in_supp_D": in_supp,
                    "D_effective": effective,
                }),
            )
        },
    ));

    checks.push(record(
        "C2",
        "D = D_Q + D_R with D_Q, D_R effective, deg D_Q = g - 2 and deg D_R = g - 1",
        "degrees of D_Q and D_R",
        json!({ "g": g, "D": s(&data.d), "D_Q": s(&data.d_q), "D_R": s(&data.d_r) }),
        || {
            let eff = |d: &Divisor| d.is_effective() || d.is_zero();
            let sum_ok = dqr == data.d;
            let (dq, dr) = (data.d_q.degree(), data.d_r.degree());
            outcome(
                sum_ok && eff(&data.d_q) && eff(&data.d_r) && dq == g - 2 && dr == g - 1,
                json!({
                    "deg_D_Q": dq,
                    "deg_D_R": dr,
                    "sum_is_D": sum_ok,
                    "effective": eff(&data.d_q) && eff(&data.d_r),
                }),
            )
        },
    ));

    checks.push(record(
        "C3",
        "h1(D_Q + D_R) = 1 and h0(K - D_Q - D_R) = 1, with h1 recomputed as a corank",
        "Serre duality count",
        json!({ "D_Q + D_R": s(&dqr), "K - D_Q - D_R": s(&(&k - &dqr)) }),
        || {
            let h1v = h1(curve, &dqr)?;
            let h0v = h0(curve, &(&k - &dqr))?;
            let corank = h1_dim_via_corank(curve, &dqr)?;
            outcome(
                h1v == 1 && h0v == 1 && corank == 1,
                json!({ "h1": h1v, "h0_dual": h0v, "h1_corank": corank }),
            )
        },
    ));

    let theta_zero = is_zero_class(curve, &data.theta);
    checks.push(record(
        "C4",
        "theta is a nonzero class in H1(O(D_Q + D_R)), so V does not split",
        "nontrivial extension V",
        json!({ "theta": data.theta.to_string(), "over": s(data.theta.ambient()) }),
        || {
            let zt = theta_zero.as_ref().map_err(|e| Error::Contract(e.to_string()))?;
            let ambient_ok = data.theta.ambient() == &dqr;
            outcome(
                ambient_ok && !zt.is_zero,
                json!({
                    "is_zero": zt.is_zero,
                    "over_is_D_Q_plus_D_R": ambient_ok,
                    "splitting_function": zt.witness.as_ref().map(|h| h.to_string()),
                }),
            )
        },
    ));

    checks.push(record(
        "C5",
        "deg V = -1, rank E = 3 and deg E = 0",
        "rank and degree of E",
        json!({ "V": data.v.to_string(), "E": data.e.to_string() }),
        || {
            let (dv, re, de) = (data.v.degree(), data.e.rank(), data.e.degree());
            outcome(dv == -1 && re == 3 && de == 0, json!({ "deg_V": dv, "rank_E": re, "deg_E": de }))
        },
    ));

    checks.push(record(
        "C6",
        "P is not in supp(D_Q), so the section (1, 1) of O(P) + O(D_Q) vanishes nowhere",
        "nowhere-vanishing section",
        json!({ "P": data.p.to_string(), "D_Q": s(&data.d_q) }),
        || {
            let supp: Vec<String> = data.d_q.support().iter().map(|p| p.to_string()).collect();
            let disjoint = !data.d_q.support().contains(&data.p);
            outcome(disjoint, json!({ "supp_D_Q": supp, "disjoint": disjoint }))
        },
    ));

    checks.push(record(
        "C7",
        "det Q ~ P + D_Q - D_R and deg det Q = 0",
        "determinant of the quotient",
        json!({ "Q": data.q.to_string(), "P + D_Q - D_R": s(&(&(&p_div + &data.d_q) - &data.d_r)) }),
        || {
            let det = data.q.determinant();
            let target = &(&p_div + &data.d_q) - &data.d_r;
            let h = is_linearly_equivalent(curve, &det, &target)?;
            outcome(
                h.is_some() && det.degree() == 0,
                json!({ "det_Q": s(&det), "deg_det_Q": det.degree(), "h": h.map(|h| h.to_string()) }),
            )
        },
    ));

    let h0_big = h0(curve, &big);
    let h0_small = h0(curve, &dqr);
    let c8a = record(
        "C8a",
        "h0(P + D_Q + D_R) = g and h0(D_Q + D_R) = g - 1, so H1(O(D_Q + D_R)) -> H1(O(P + D_Q + D_R)) is injective",
        "long exact sequence dimensions",
        json!({ "g": g, "P + D_Q + D_R": s(&big), "D_Q + D_R": s(&dqr) }),
        || {
            let (a, b) = (*h0_big.as_ref().map_err(|e| Error::Contract(e.to_string()))?, *h0_small
                .as_ref()
                .map_err(|e| Error::Contract(e.to_string()))?);
            outcome(a as i64 == g && b as i64 == g - 1, json!({ "h0_P_D_Q_D_R": a, "h0_D_Q_D_R": b }))
        },
    );
    let c8a_pass = c8a.pass;
    checks.push(c8a);

    let c4_pass = checks[3].pass;
    checks.push(record(
        "C8b",
        "omega is the image of theta in H1(O(P + D_Q + D_R)) and is nonzero",
        "image of theta",
        json!({ "omega": data.omega.to_string(), "over": s(data.omega.ambient()) }),
        || {
            let image = push_forward(&data.theta, &big)?;
            let is_image = image == data.omega;
            let zero = is_zero_class(curve, &data.omega)?.is_zero;
            let consistent = !(c8a_pass && c4_pass) || !zero;
            outcome(
                is_image && !zero && consistent,
                json!({
                    "is_image_of_theta": is_image,
                    "is_zero": zero,
                    "implied_by_C8a_and_C4": c8a_pass && c4_pass,
                    "consistent": consistent,
                }),
            )
        },
    ));

    checks.push(record(
        "C9",
        "E is not flat: the summand O(P) has degree 1",
        "E is not flat",
        json!({ "E": data.e.to_string() }),
        || {
            let fv = is_flat(curve, &data.e)?;
            let (mut w, replayed) = flatness_witnesses(data, &data.e, &fv)?;
            let cited = fv
                .trace
                .iter()
                .rev()
                .find(|st| st.path == ROOT && st.rule == Rule::R3)
                .and_then(|st| {
                    st.facts.iter().find_map(|f| match f {
                        crate::bundle::Fact::Verdict { path, value: Verdict::NotFlat } => Some(path.clone()),
                        _ => None,
                    })
                });
            let cited_node = cited.as_ref().and_then(|p| data.e.at(p));
            let cites_line_p = cited_node == Some(BundleExpr::line(p_div.clone()));
            w.insert("cited_path".into(), json!(cited));
            w.insert("cited_bundle".into(), json!(cited_node.map(|b| b.to_string())));
            let pass = fv.verdict == Verdict::NotFlat && replayed == fv.verdict && cites_line_p;
            Ok(Outcome { witnesses: w, pass })
        },
    ));

    checks.push(record(
        "C10",
        "Q is flat by R6: a non-split extension of degree 0 whose subbundle O(P + D_Q) has degree g - 1 > 0",
        "Q is flat",
        json!({ "Q": data.q.to_string() }),
        || {
            let fv = is_flat(curve, &data.q)?;
            let (mut w, replayed) = flatness_witnesses(data, &data.q, &fv)?;
            let sub_deg = (&p_div + &data.d_q).degree();
            w.insert("deg_sub".into(), json!(sub_deg));
            let pass = fv.verdict == Verdict::Flat
                && replayed == fv.verdict
                && root_rule(&fv) == Some(Rule::R6)
                && sub_deg == g - 1
                && sub_deg > 0;
            Ok(Outcome { witnesses: w, pass })
        },
    ));

    checks.push(record(
        "C11",
        "F = O is flat",
        "the subbundle is flat",
        json!({ "F": data.f.to_string() }),
        || {
            let fv = is_flat(curve, &data.f)?;
            let (w, replayed) = flatness_witnesses(data, &data.f, &fv)?;
            let pass = data.f == BundleExpr::line(Divisor::zero()) && fv.verdict == Verdict::Flat && replayed == fv.verdict;
            Ok(Outcome { witnesses: w, pass })
        },
    ));

    checks.push(record(
        "C12",
        "deg E = deg F + deg Q and rank E = rank F + rank Q",
        "exactness bookkeeping",
        json!({ "E": data.e.to_string(), "F": data.f.to_string(), "Q": data.q.to_string() }),
        || {
            let (de, df, dq) = (data.e.degree(), data.f.degree(), data.q.degree());
            let (re, rf, rq) = (data.e.rank(), data.f.rank(), data.q.rank());
            outcome(
                de == df + dq && re == rf + rq,
                json!({
                    "deg_E": de, "deg_F": df, "deg_Q": dq,
                    "rank_E": re, "rank_F": rf, "rank_Q": rq,
                }),
            )
        },
    ));

    let overall_pass = checks.iter().all(|c| c.pass);
    let spec = CurveSpec::from_curve(curve, None);
    let text = |l: &Literal| match l {
        Literal::Int(n) => n.to_string(),
        Literal::Text(t) => t.clone(),
    };
    let bundles = [("E", &data.e), ("F", &data.f), ("Q", &data.q), ("V", &data.v)]
        .into_iter()
        .map(|(k, b)| (k.to_string(), b.to_string()))
        .collect();
    Certificate {
        version: VERSION.into(),
        curve: CurveRecord {
            field: spec.field,
            f: spec.f.iter().map(text).collect(),
            genus: curve.genus(),
            hints: spec.hints.iter().map(|[x, y]| [text(x), text(y)]).collect(),
        },
        seed: data.seed,
        semantics: semantics(curve.field()),
        construction: ConstructionRecord {
            p: data.p.to_string(),
            d: s(&data.d),
            d_q: s(&data.d_q),
            d_r: s(&data.d_r),
            theta: ClassRecord { over: s(data.theta.ambient()), tails: data.theta.to_string() },
            omega: ClassRecord { over: s(data.omega.ambient()), tails: data.omega.to_string() },
            bundles,
        },
        checks,
        overall_pass,
    }
}

/// The checker's verdict on a certificate.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub recomputed: Certificate,
    pub mismatches: Vec<String>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.recomputed.overall_pass && self.mismatches.is_empty()
    }
}

/// A JSON value as it appears in the certificate.
struct Shown<'a>(Option<&'a Value>);

impl std::fmt::Debug for Shown<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "nothing"),
        }
    }
}

/// Rebuilds the construction from the certificate's inputs alone (omega and
/// the bundles are re-derived from theta), recomputes every check and
/// compares outcomes and witnesses with what the certificate records.
pub fn check_certificate(cert: &Certificate) -> Result<CheckReport> {
    let spec = CurveSpec {
        field: cert.curve.field.clone(),
        f: cert.curve.f.iter().cloned().map(Literal::Text).collect(),
        hints: cert.curve.hints.iter().map(|[x, y]| [Literal::Text(x.clone()), Literal::Text(y.clone())]).collect(),
        seed: Some(cert.seed),
    };
    let curve = spec.curve()?;
    let c = &cert.construction;
    let p = parse_place(&curve, &c.p)?;
    let d = parse_divisor(&curve, &c.d)?;
    let d_q = parse_divisor(&curve, &c.d_q)?;
    let d_r = parse_divisor(&curve, &c.d_r)?;
    let theta_over = parse_divisor(&curve, &c.theta.over)?;
    let theta = parse_class(&curve, &theta_over, &c.theta.tails)?;
    let data = ConstructionData::assemble(curve.clone(), cert.seed, p, d, d_q, d_r, theta)?;
    let recomputed = verify(&data);

    let mut mismatches = Vec::new();
    let mut differ = |what: String, want: String, got: String| {
        mismatches.push(format!("{what}: certificate has {want}, recomputed {got}"));
    };
    let mut same = |what: &str, want: &dyn std::fmt::Debug, got: &dyn std::fmt::Debug| {
        let (w, g) = (format!("{want:?}"), format!("{got:?}"));
        if w != g {
            differ(what.to_string(), w, g);
        }
    };
    let r = &recomputed;
    same("version", &cert.version, &VERSION);
    same("curve", &cert.curve, &r.curve);
    same("semantics", &cert.semantics, &r.semantics);
    same("omega", &c.omega, &r.construction.omega);
    same("theta", &c.theta, &r.construction.theta);
    same("D", &c.d, &r.construction.d);
    same("bundles", &c.bundles, &r.construction.bundles);
    let ids = |cs: &[Check]| cs.iter().map(|c| c.check_id.clone()).collect::<Vec<_>>();
    same("check list", &ids(&cert.checks), &ids(&r.checks));
    for rc in &r.checks {
        let Some(claimed) = cert.check(&rc.check_id) else { continue };
        let id = &rc.check_id;
        same(&format!("{id} pass"), &claimed.pass, &rc.pass);
        same(&format!("{id} statement"), &claimed.statement, &rc.statement);
        same(&format!("{id} anchor"), &claimed.paper_anchor, &rc.paper_anchor);
        for (what, want, got) in [("inputs", &claimed.inputs, &rc.inputs), ("witnesses", &claimed.witnesses, &rc.witnesses)] {
            let keys: std::collections::BTreeSet<&String> = want.keys().chain(got.keys()).collect();
            for k in keys {
                if want.get(k) != got.get(k) {
                    same(&format!("{id} {what}.{k}"), &Shown(want.get(k)), &Shown(got.get(k)));
                }
            }
        }
    }
    same("overall_pass", &cert.overall_pass, &r.overall_pass);
    Ok(CheckReport { recomputed, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use crate::cohomology::H1Class;
    use crate::construction::build;
    use crate::curve::HyperellipticCurve;

    fn g2() -> HyperellipticCurve {
        let q = Field::Rational;
        HyperellipticCurve::new(Poly::from_i64s(q, &[1, 0, 0, 0, 0, 1]))
            .unwrap()
            .with_hints(&[(q.from_i64(0), q.one())])
            .unwrap()
    }

    fn passes(cert: &Certificate) -> Vec<(String, bool)> {
        cert.checks.iter().map(|c| (c.check_id.clone(), c.pass)).collect()
    }

    #[test]
    fn genus_two_certificate() {
        let data = build(&g2(), 0).unwrap();
        let cert = verify(&data);
        assert!(cert.overall_pass, "{:?}", passes(&cert));
        assert_eq!(cert.checks.len(), 13);
        assert_eq!(cert.check("C3").unwrap().witnesses["h1"], json!(1));
        assert_eq!(cert.check("C8a").unwrap().witnesses["h0_P_D_Q_D_R"], json!(2));
        assert_eq!(cert.check("C9").unwrap().witnesses["cited_path"], json!("$.0"));
        assert_eq!(cert.check("C1").unwrap().witnesses["h"], json!("x"));
        let text = cert.to_json();
        assert_eq!(text, verify(&build(&g2(), 0).unwrap()).to_json());
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        let report = check_certificate(&back).unwrap();
        assert!(report.pass(), "{:?}", report.mismatches);
    }

    #[test]
    fn zero_theta_fails_c4_c8b_c10() {
        let data = build(&g2(), 0).unwrap();
        let zero = H1Class::zero(data.theta.ambient().clone());
        let t = ConstructionData::assemble(data.curve.clone(), 0, data.p, data.d, data.d_q, data.d_r, zero).unwrap();
        let cert = verify(&t);
        let failed: Vec<_> = cert.checks.iter().filter(|c| !c.pass).map(|c| c.check_id.as_str()).collect();
        assert_eq!(failed, ["C4", "C8b", "C10"]);
        assert_eq!(cert.check("C10").unwrap().witnesses["verdict"], json!("NotFlat"));
        assert!(!cert.overall_pass);
    }

    #[test]
    fn edited_tail_is_caught_by_the_checker() {
        let cert = verify(&build(&g2(), 0).unwrap());
        let mut text = cert.to_json();
        text = text.replace("\"tails\": \"(0,-1): 1*t^-2\"", "\"tails\": \"(0,-1): 1*t^-1\"");
        let tampered = Certificate::from_json(&text).unwrap();
        let report = check_certificate(&tampered).unwrap();
        assert!(!report.pass());
        assert!(!report.recomputed.check("C4").unwrap().pass);
        assert!(report.mismatches.iter().any(|m| m.starts_with("C4 pass")));
    }

    #[test]
    fn forged_witness_is_caught() {
        let mut cert = verify(&build(&g2(), 0).unwrap());
        cert.checks[2].witnesses.insert("h1".into(), json!(2));
        let report = check_certificate(&cert).unwrap();
        assert!(!report.pass());
        assert_eq!(report.mismatches.len(), 1);
    }
}

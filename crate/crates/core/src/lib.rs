//! Exact divisor and cohomology computations on hyperelliptic curves
//! `y^2 = f(x)` with `deg f` odd, over Q or F_p.

pub mod algebra;
pub mod bundle;
pub mod certificate;
pub mod cohomology;
pub mod construction;
pub mod curve;
pub mod divisor;
pub mod error;
pub mod function;
pub mod local;
pub mod parse;
pub mod riemann_roch;
pub mod spec_file;

pub use algebra::{Field, FieldElem, Poly};
pub use bundle::{is_flat, replay, BundleExpr, FlatnessVerdict, Rule, TraceStep, Verdict};
pub use certificate::{check_certificate, verify, CheckReport, Certificate};
pub use cohomology::{h1_dim_via_corank, is_zero_class, nonzero_class, push_forward, H1Class, ZeroTest};
pub use construction::{build, decompose_canonical, split_divisor, ConstructionData};
pub use curve::{Branch, HyperellipticCurve, Place};
pub use divisor::Divisor;
pub use error::{Error, Result};
pub use function::FunctionElement;
pub use local::{expand_at, LaurentSeries};
pub use parse::{parse_bundle, parse_class, parse_divisor, parse_place, parse_poly};
pub use riemann_roch::{h0, h1, is_linearly_equivalent, rr_basis, serre_dual, RRSpace};
pub use spec_file::CurveSpec;

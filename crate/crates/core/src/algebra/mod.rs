//! Exact arithmetic: base fields, polynomials, factorization, residue fields
//! and dense linear algebra.

pub mod factor;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod residue;

pub use factor::{factor, is_irreducible};
pub use field::{Field, FieldElem};
pub use linalg::{solve_linear, LinearSolution, Matrix};
pub use poly::{is_squarefree, Poly};
pub use residue::{ResElem, ResidueField};

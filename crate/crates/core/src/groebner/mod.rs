//! Exact Gröbner-basis certification of local deformation dimensions.

mod analysis;
mod buchberger;
pub mod field;
mod ideal;
pub mod instances;
mod poly;

use thiserror::Error;

pub use analysis::{analyze_basis, radical_step, BasisAnalysis};
pub use buchberger::{groebner_basis, normal_form, GroebnerOptions, DEFAULT_TERM_BUDGET};
pub use field::{FieldElem, NumberField, Rational};
pub use ideal::{vinberg_ideal, ExactRealization};
pub use poly::{Monomial, Poly, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("number field: {0}")]
    Field(String),
    #[error("term budget of {budget} exceeded")]
    ResourceExceeded { budget: usize },
    #[error("basis is not triangular at the origin: {0}")]
    NonTriangular(String),
    #[error("edge order {0} has no exact cosine in the supported fields")]
    UnsupportedOrder(u32),
    #[error("realization does not satisfy the hyperbolic equations: {0}")]
    NotRealization(String),
}

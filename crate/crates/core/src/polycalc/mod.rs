//! Exact polynomial exterior calculus on R^n.
//!
//! Everything here is exact rational arithmetic: forms, vector fields and
//! bivectors carry [`Poly`] coefficients, and identities such as `d o d = 0`
//! hold as equalities of canonical term maps.

mod forms;
mod parse;
mod poly;

pub use forms::{
    exterior_d, interior_product, lie_derivative, lie_derivative_vf, pullback, vf_bracket, wedge, Bivector,
    KForm, PolyMap, VectorField,
};
pub use parse::parse_poly;
pub use poly::{default_names, Exponent, Poly, PolyJson};

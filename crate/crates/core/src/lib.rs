//! Exact analysis of affine variational inequalities `z ∈ Ax + N(C, x)` over
//! polyhedral sets.
//!
//! The core math is generic over [`Scalar`]; the aliases at the crate root fix
//! it to exact rationals, which is what every certificate uses.

pub mod avi_solver;
pub mod complementarity;
pub mod error;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod polyhedra;
pub mod regularity;
pub mod scalar;

pub use error::{PolyregError, Result};
pub use linalg::{Constraint, LpOutcome, Matrix, Relation, Vector};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
pub type RatVector = Vector<Rational>;
pub type RatMatrix = Matrix<Rational>;

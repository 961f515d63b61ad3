//! Exact linear algebra: vectors, matrices, elimination and a simplex solver.

pub mod lp;
pub mod matrix;
pub mod vector;

pub use lp::{lp_feasible, lp_maximize, lp_minimize, Constraint, LpOutcome, Relation};
pub use matrix::{orthogonal_complement, rank_of, span_basis, Echelon, Matrix};
pub use vector::Vector;

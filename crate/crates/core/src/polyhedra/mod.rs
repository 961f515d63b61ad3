//! Polyhedral sets and cones: inequality and generator forms, face lattices,
//! tangent and normal cones, polars and exact projection.

mod cone;
mod dd;
mod hpoly;
mod lattice;
mod projection;

pub use cone::{cone_minus, in_generated_cone, nonzero_in_cone, orthogonal_subspace, PolyCone};
pub use dd::{h_to_v, v_to_h, Generators};
pub use hpoly::HPolyhedron;
pub use lattice::{brute_force_faces, closure, enumerate_faces, minimal_face, normal_cone, tangent_cone, Face, FaceLattice};
pub use projection::{project, project_affine, project_with};

use crate::scalar::Scalar;

/// `K°`.
pub fn polar<T: Scalar>(k: &PolyCone<T>) -> PolyCone<T> {
    k.polar()
}

/// A copy of `k` carrying both the inequality and the generator form.
pub fn cone_convert<T: Scalar>(k: &PolyCone<T>) -> PolyCone<T> {
    k.converted()
}

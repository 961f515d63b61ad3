use serde::Serialize;

use crate::error::{PolyregError, Result};
use crate::linalg::{Matrix, Vector};
use crate::polyhedra::{cone_minus, nonzero_in_cone, FaceLattice, HPolyhedron, PolyCone};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CriticalFace<T> {
    pub holds: bool,
    /// `(I(F1), I(F2), z)` with `0 ≠ z ∈ cone(F2 - F1)` and
    /// `Aᵀ z ∈ (F2 - F1)°`.
    pub witness: Option<(Vec<usize>, Vec<usize>, Vector<T>)>,
}

/// Default base point: a relative-interior point of the first vertex, or of
/// the first minimal face when `C` has no vertex.
pub fn default_base_point<T: Scalar>(lattice: &FaceLattice<T>) -> Vector<T> {
    let idx = lattice.vertices().first().copied().unwrap_or_else(|| lattice.minimal_faces()[0]);
    lattice.faces[idx].ri_point.clone()
}

/// `T(C, x̄)` as a cone in inequality form.
pub fn localize<T: Scalar>(c: &HPolyhedron<T>, base_point: &Vector<T>) -> Result<PolyCone<T>> {
    if !c.contains(base_point) {
        return Err(PolyregError::NotInSet);
    }
    let rows = c.active_set(base_point).into_iter().map(|i| c.row(i).clone()).collect();
    Ok(PolyCone::from_h(c.dim(), rows))
}

/// For all faces `F1 ⊆ F2` of the cone `K`, no nonzero `z ∈ F2 + L(F1)` has
/// `⟨z, A g⟩ <= 0` for every generator `g` of `F2 + L(F1)`.
pub fn check_critical_face<T: Scalar>(a: &Matrix<T>, k: &PolyCone<T>, lattice: &FaceLattice<T>) -> CriticalFace<T> {
    let n = k.ambient_dim();
    let faces: Vec<PolyCone<T>> = lattice.faces.iter().map(|f| k.face_cone(&f.active_set)).collect();
    for (i1, i2) in lattice.nested_pairs() {
        let diff = cone_minus(&faces[i2], &faces[i1]).expect("nested faces");
        let mut rows = diff.h_rows().to_vec();
        rows.extend(diff.generators().all_directions().iter().map(|g| a.mul_vec(g)));
        if let Some(z) = nonzero_in_cone(&rows, n) {
            return CriticalFace {
                holds: false,
                witness: Some((lattice.faces[i1].active_set.clone(), lattice.faces[i2].active_set.clone(), z)),
            };
        }
    }
    CriticalFace { holds: true, witness: None }
}

/// `(F2 - F1)°` computed as the polar of `F2 + L(F1)`.
pub fn polar_difference<T: Scalar>(k: &PolyCone<T>, lattice: &FaceLattice<T>, f1: usize, f2: usize) -> Result<PolyCone<T>> {
    let a = k.face_cone(&lattice.faces[f1].active_set);
    let b = k.face_cone(&lattice.faces[f2].active_set);
    Ok(cone_minus(&b, &a)?.polar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::normal_cone;
    use crate::Rational;

    #[test]
    fn identity_always_holds() {
        let k = PolyCone::<Rational>::orthant(2);
        let l = k.lattice().unwrap();
        assert!(check_critical_face(&Matrix::identity(2), &k, &l).holds);
    }

    #[test]
    fn negative_scalar_witness() {
        let k = PolyCone::<Rational>::orthant(1);
        let l = k.lattice().unwrap();
        let rep = check_critical_face(&Matrix::from_ints(1, 1, &[-1]), &k, &l);
        assert!(!rep.holds);
        let (_, _, z) = rep.witness.unwrap();
        assert!(z[0].is_pos());
    }

    #[test]
    fn polar_difference_examples() {
        let k = PolyCone::<Rational>::orthant(2);
        let l = k.lattice().unwrap();
        let origin = l.index_of(&[0, 1]).unwrap();
        let top = l.top();
        assert!(polar_difference(&k, &l, origin, top).unwrap().set_eq(&k.negated()));
        assert!(polar_difference(&k, &l, top, top).unwrap().set_eq(&PolyCone::zero(2)));
        assert!(polar_difference(&k, &l, top, origin).is_err());
        let poly = k.as_hpolyhedron();
        let ray = l.index_of(&[0]).unwrap();
        let rhs = normal_cone(&poly, &l.faces[origin]).minus(&normal_cone(&poly, &l.faces[ray]));
        assert!(polar_difference(&k, &l, origin, ray).unwrap().set_eq(&rhs));
    }

    #[test]
    fn default_base_point_is_vertex() {
        let k = PolyCone::<Rational>::orthant(2);
        let l = k.lattice().unwrap();
        assert_eq!(default_base_point(&l), Vector::from_ints(&[0, 0]));
        let c = HPolyhedron::<Rational>::orthant(2);
        assert!(localize(&c, &Vector::from_ints(&[0, 1])).unwrap().set_eq(&PolyCone::from_h(2, vec![Vector::from_ints(&[-1, 0])])));
    }
}

use serde::Serialize;

use crate::complementarity::{ComplementarityMap, ConePair};
use crate::linalg::{orthogonal_complement, Matrix, Vector};
use crate::polyhedra::{nonzero_in_cone, normal_cone, tangent_cone, FaceLattice, HPolyhedron};
use crate::scalar::Scalar;

/// Why a covering pair fails the separation test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationFailure {
    /// `T L(F) + S L(Λ(F'))` is not a hyperplane.
    NotHyperplane,
    /// `T L(F) + S Λ(F)` lies inside the hyperplane or meets both open sides.
    ConeSide,
    /// `T F'` lies inside the hyperplane or on the same side as the cone.
    FaceSide,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceSeparation {
    pub holds: bool,
    pub nonsingular: bool,
    /// Active set of the first face where non-singularity fails.
    pub singular_face: Option<Vec<usize>>,
    /// First covering pair `(F, F')` that is not properly separated.
    pub violation: Option<(Vec<usize>, Vec<usize>, SeparationFailure)>,
}

/// Face separation for `Φ(x) = T x + S Λ(F_min(x))`: non-singularity and, for
/// every covering pair `F ⊂ F'`, proper separation of `T L(F) + S Λ(F)` and
/// `T F'` by the hyperplane `T L(F) + S L(Λ(F'))` placed through the image of
/// a relative-interior point of `F`.
pub fn check_face_separation<T: Scalar>(map: &ComplementarityMap<T>) -> FaceSeparation {
    let rel = &map.relation;
    let lat = &rel.lattice;
    let n = map.dim();
    let key = |i: usize| lat.faces[i].active_set.clone();
    let singular = map.nonsingular_violation();
    let nonsingular = singular.is_none();
    let mut violation = None;
    for &(i, j) in &lat.covering_pairs {
        if let Some(reason) = pair_failure(map, i, j, n) {
            violation = Some((key(i), key(j), reason));
            break;
        }
    }
    FaceSeparation {
        holds: nonsingular && violation.is_none(),
        nonsingular,
        singular_face: singular.map(key),
        violation,
    }
}

fn pair_failure<T: Scalar>(map: &ComplementarityMap<T>, i: usize, j: usize, n: usize) -> Option<SeparationFailure> {
    let rel = &map.relation;
    let (f, fp) = (&rel.lattice.faces[i], &rel.lattice.faces[j]);
    let mut span: Vec<Vector<T>> = f.span_basis.iter().map(|b| map.t.mul_vec(b)).collect();
    span.extend(rel.assignment[j].span().iter().map(|b| map.s.mul_vec(b)));
    let normal = orthogonal_complement(&span, n);
    if normal.len() != 1 {
        return Some(SeparationFailure::NotHyperplane);
    }
    let nu = &normal[0];

    let gens = rel.assignment[i].generators();
    if gens.lineality.iter().any(|l| !nu.dot(&map.s.mul_vec(l)).is_negligible()) {
        return Some(SeparationFailure::ConeSide);
    }
    let signs: Vec<T> = gens.rays.iter().map(|r| nu.dot(&map.s.mul_vec(r))).collect();
    let cone_side = if signs.iter().all(|v| !v.is_pos()) && signs.iter().any(|v| v.is_neg()) {
        -T::one()
    } else if signs.iter().all(|v| !v.is_neg()) && signs.iter().any(|v| v.is_pos()) {
        T::one()
    } else {
        return Some(SeparationFailure::ConeSide);
    };
    let face_side = nu.dot(&map.t.mul_vec(&fp.ri_point.sub(&f.ri_point)));
    if (face_side * cone_side).is_neg() {
        None
    } else {
        Some(SeparationFailure::FaceSide)
    }
}

/// `K ∩ H = {0}`, decided by LPs over the unit box.
pub fn check_cone_separation<T: Scalar>(pair: &ConePair<T>) -> bool {
    let mut rows = pair.k.h_rows().to_vec();
    rows.extend(pair.h.h_rows().iter().cloned());
    nonzero_in_cone(&rows, pair.ambient_dim()).is_none()
}

/// For every face `F̄` of `C`, `A T(C, F̄) ∩ N(C, F̄) = {0}`: the cone pairs of
/// the tangential extensions of `N(C, ·)` viewed on `A(C)`. Returns the first
/// face where the intersection is nontrivial.
pub fn check_instance_cone_separation<T: Scalar>(
    a: &Matrix<T>,
    c: &HPolyhedron<T>,
    lattice: &FaceLattice<T>,
) -> Option<(Vec<usize>, Vector<T>)> {
    let n = c.dim();
    for face in &lattice.faces {
        let k = tangent_cone(c, face).image(a);
        let h = normal_cone(c, face);
        let mut rows = k.h_rows().to_vec();
        rows.extend(h.h_rows().iter().cloned());
        if let Some(w) = nonzero_in_cone(&rows, n) {
            return Some((face.active_set.clone(), w));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complementarity::{canonical_normal_relation, ComplementarityRelation};
    use crate::polyhedra::{enumerate_faces, PolyCone};
    use crate::Rational;

    fn q(p: i64) -> Rational {
        Rational::from_ratio(p, 1)
    }

    #[test]
    fn identity_separates_on_square() {
        let c = HPolyhedron::boxed(&[q(0), q(0)], &[q(1), q(1)]);
        let l = enumerate_faces(&c).unwrap();
        let map = ComplementarityMap::plain(canonical_normal_relation(&c, &l));
        assert!(check_face_separation(&map).holds);
    }

    #[test]
    fn same_side_assignment_fails() {
        let c = HPolyhedron::<Rational>::orthant(1);
        let l = enumerate_faces(&c).unwrap();
        let origin = l.index_of(&[0]).unwrap();
        let mut assignment = vec![PolyCone::zero(1); 2];
        assignment[origin] = PolyCone::orthant(1);
        let rel = ComplementarityRelation::new(c, l, assignment).unwrap();
        let rep = check_face_separation(&ComplementarityMap::plain(rel));
        assert!(!rep.holds);
        assert_eq!(rep.violation.unwrap().2, SeparationFailure::FaceSide);
    }

    #[test]
    fn negative_scalar_fails() {
        let c = HPolyhedron::<Rational>::orthant(1);
        let l = enumerate_faces(&c).unwrap();
        let rel = canonical_normal_relation(&c, &l);
        let map = ComplementarityMap::new(rel, Matrix::from_ints(1, 1, &[-1]), Matrix::identity(1)).unwrap();
        assert!(!check_face_separation(&map).holds);
    }

    #[test]
    fn cone_pairs() {
        let pair = ConePair::polar_pair(PolyCone::<Rational>::orthant(2)).unwrap();
        assert!(check_cone_separation(&pair));
        let upper = PolyCone::from_h(2, vec![Vector::<Rational>::from_ints(&[0, -1])]);
        let same = ConePair::from_key_map(upper.clone(), upper, &[]).unwrap();
        assert!(!check_cone_separation(&same));
    }
}

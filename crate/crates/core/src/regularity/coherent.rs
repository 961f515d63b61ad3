use std::cmp::Ordering;

use serde::Serialize;

use crate::linalg::{span_basis, Matrix, Vector};
use crate::polyhedra::{Face, FaceLattice, HPolyhedron};
use crate::scalar::Scalar;

/// `det T_F` for one face, or the reason it is undefined.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub enum FaceDeterminant<T> {
    Value(#[serde(serialize_with = "crate::regularity::ser_scalar")] T),
    /// `L(F) ⊕ L(N(C, F)) ≠ R^n`.
    NonComplementary,
}

impl<T: Scalar> FaceDeterminant<T> {
    pub fn sign(&self) -> Option<Ordering> {
        match self {
            FaceDeterminant::Value(v) => Some(v.sign()),
            FaceDeterminant::NonComplementary => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CoherentOrientation<T> {
    pub coherent: bool,
    /// Per face (lattice order): active set and `det T_F`.
    pub determinants: Vec<(Vec<usize>, FaceDeterminant<T>)>,
    /// First pair of faces whose determinants disagree in sign, or a single
    /// face (listed twice) whose operator is singular or undefined.
    pub first_bad_pair: Option<(Vec<usize>, Vec<usize>)>,
}

/// `det T_F` with `T_F = A` on `L(F)` and the identity on `n_basis`, computed
/// as `det[A B | N] / det[B | N]`.
pub fn face_determinant<T: Scalar>(a: &Matrix<T>, b_basis: &[Vector<T>], n_basis: &[Vector<T>]) -> FaceDeterminant<T> {
    let n = a.rows();
    if b_basis.len() + n_basis.len() != n {
        return FaceDeterminant::NonComplementary;
    }
    let mut base: Vec<Vector<T>> = b_basis.to_vec();
    base.extend(n_basis.iter().cloned());
    let mut image: Vec<Vector<T>> = b_basis.iter().map(|b| a.mul_vec(b)).collect();
    image.extend(n_basis.iter().cloned());
    let den = Matrix::from_columns(&base, n).det().expect("square");
    if den.is_negligible() {
        return FaceDeterminant::NonComplementary;
    }
    let num = Matrix::from_columns(&image, n).det().expect("square");
    FaceDeterminant::Value(num / den)
}

/// `det T_F` using the face's own span basis and a basis of the active rows.
pub fn det_t_face<T: Scalar>(a: &Matrix<T>, c: &HPolyhedron<T>, face: &Face<T>) -> FaceDeterminant<T> {
    let rows: Vec<Vector<T>> = face.active_set.iter().map(|&i| c.row(i).clone()).collect();
    face_determinant(a, &face.span_basis, &span_basis(&rows, c.dim()))
}

/// All `det T_F` nonzero and of one sign. Signs are compared along covering
/// pairs, which connect the whole lattice; `all_pairs` compares every face
/// with the first instead.
pub fn check_coherent_orientation<T: Scalar>(
    a: &Matrix<T>,
    c: &HPolyhedron<T>,
    lattice: &FaceLattice<T>,
    all_pairs: bool,
) -> CoherentOrientation<T> {
    let dets: Vec<FaceDeterminant<T>> = lattice.faces.iter().map(|f| det_t_face(a, c, f)).collect();
    let key = |i: usize| lattice.faces[i].active_set.clone();
    let mut first_bad_pair = None;
    if let Some(i) = dets.iter().position(|d| !matches!(d.sign(), Some(Ordering::Less | Ordering::Greater))) {
        first_bad_pair = Some((key(i), key(i)));
    } else if all_pairs {
        for j in 1..dets.len() {
            if dets[j].sign() != dets[0].sign() {
                first_bad_pair = Some((key(0), key(j)));
                break;
            }
        }
    } else {
        for &(i, j) in &lattice.covering_pairs {
            if dets[i].sign() != dets[j].sign() {
                first_bad_pair = Some((key(i), key(j)));
                break;
            }
        }
    }
    CoherentOrientation {
        coherent: first_bad_pair.is_none(),
        determinants: lattice.faces.iter().map(|f| f.active_set.clone()).zip(dets).collect(),
        first_bad_pair,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::enumerate_faces;
    use crate::Rational;

    #[test]
    fn scalar_cases() {
        let c = HPolyhedron::<Rational>::orthant(1);
        let l = enumerate_faces(&c).unwrap();
        assert!(check_coherent_orientation(&Matrix::from_ints(1, 1, &[2]), &c, &l, false).coherent);
        let neg = check_coherent_orientation(&Matrix::from_ints(1, 1, &[-1]), &c, &l, false);
        assert!(!neg.coherent);
        assert!(neg.first_bad_pair.is_some());
        assert!(!check_coherent_orientation(&Matrix::from_ints(1, 1, &[0]), &c, &l, true).coherent);
    }

    #[test]
    fn identity_is_coherent_on_square() {
        let one = Rational::from_ratio(1, 1);
        let zero = Rational::from_ratio(0, 1);
        let c = HPolyhedron::boxed(&[zero.clone(), zero], &[one.clone(), one]);
        let l = enumerate_faces(&c).unwrap();
        let rep = check_coherent_orientation(&Matrix::identity(2), &c, &l, false);
        assert!(rep.coherent);
        assert!(rep.determinants.iter().all(|(_, d)| *d == FaceDeterminant::Value(Rational::from_ratio(1, 1))));
    }

    #[test]
    fn non_complementary_split() {
        let b = vec![Vector::<Rational>::from_ints(&[1, 0])];
        let n = vec![Vector::from_ints(&[2, 0])];
        assert_eq!(face_determinant(&Matrix::identity(2), &b, &n), FaceDeterminant::NonComplementary);
    }
}

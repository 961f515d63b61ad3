use super::cone::in_generated_cone;
use super::hpoly::HPolyhedron;
use super::lattice::{enumerate_faces, Face, FaceLattice};
use crate::error::{PolyregError, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// Orthogonal projection of `z` onto `aff F`.
pub fn project_affine<T: Scalar>(face: &Face<T>, z: &Vector<T>) -> Vector<T> {
    let x0 = &face.ri_point;
    if face.span_basis.is_empty() {
        return x0.clone();
    }
    let b = Matrix::from_columns(&face.span_basis, x0.len());
    let bt = b.transpose();
    let gram = bt.mul(&b);
    let rhs = bt.mul_vec(&z.sub(x0));
    let (coef, _) = gram
        .solve_linear(&rhs)
        .expect("square Gram matrix")
        .expect("Gram matrix of a basis is invertible");
    x0.add(&b.mul_vec(&coef))
}

/// `Π_C(z)` given a precomputed lattice: the face whose relative interior
/// holds the projection of `z` onto its affine hull, with `z - x` in the
/// normal cone of that face.
pub fn project_with<T: Scalar>(c: &HPolyhedron<T>, lattice: &FaceLattice<T>, z: &Vector<T>) -> Result<Vector<T>> {
    if z.len() != c.dim() {
        return Err(PolyregError::DimensionMismatch { expected: c.dim(), found: z.len() });
    }
    for face in &lattice.faces {
        let x = project_affine(face, z);
        if !c.contains(&x) || c.active_set(&x) != face.active_set {
            continue;
        }
        let rows: Vec<Vector<T>> = face.active_set.iter().map(|&i| c.row(i).clone()).collect();
        if in_generated_cone(&rows, &[], &z.sub(&x), c.dim()) {
            return Ok(x);
        }
    }
    Err(PolyregError::EmptySet)
}

/// `Π_C(z)`, enumerating the faces of `C` first.
pub fn project<T: Scalar>(c: &HPolyhedron<T>, z: &Vector<T>) -> Result<Vector<T>> {
    let lattice = enumerate_faces(c)?;
    project_with(c, &lattice, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn orthant_projection() {
        let c = HPolyhedron::<Rational>::orthant(2);
        assert_eq!(project(&c, &Vector::from_ints(&[-1, 2])).unwrap(), Vector::from_ints(&[0, 2]));
        assert_eq!(project(&c, &Vector::from_ints(&[3, 2])).unwrap(), Vector::from_ints(&[3, 2]));
    }

    #[test]
    fn square_corner_and_edge() {
        let one = Rational::from_ratio(1, 1);
        let zero = Rational::from_ratio(0, 1);
        let c = HPolyhedron::boxed(&[zero.clone(), zero], &[one.clone(), one]);
        assert_eq!(project(&c, &Vector::from_ints(&[5, 5])).unwrap(), Vector::from_ints(&[1, 1]));
        let half = Vector::new(vec![Rational::from_ratio(1, 2), Rational::from_ratio(1, 1)]);
        assert_eq!(project(&c, &Vector::new(vec![Rational::from_ratio(1, 2), Rational::from_ratio(7, 1)])).unwrap(), half);
    }
}

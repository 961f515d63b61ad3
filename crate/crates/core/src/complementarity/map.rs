use super::relation::ComplementarityRelation;
use crate::error::{PolyregError, Result};
use crate::linalg::{Matrix, Vector};
use crate::polyhedra::{in_generated_cone, minimal_face};
use crate::scalar::Scalar;

/// `Φ(x) = T x + S Λ(F_min(x))` for `x ∈ C`.
#[derive(Clone, Debug)]
pub struct ComplementarityMap<T> {
    pub relation: ComplementarityRelation<T>,
    pub t: Matrix<T>,
    pub s: Matrix<T>,
}

impl<T: Scalar> ComplementarityMap<T> {
    /// `T = S = I`.
    pub fn plain(relation: ComplementarityRelation<T>) -> Self {
        let n = relation.dim();
        ComplementarityMap { relation, t: Matrix::identity(n), s: Matrix::identity(n) }
    }

    pub fn new(relation: ComplementarityRelation<T>, t: Matrix<T>, s: Matrix<T>) -> Result<Self> {
        let n = relation.dim();
        for m in [&t, &s] {
            if m.rows() != n || m.cols() != n {
                return Err(PolyregError::DimensionMismatch { expected: n, found: if m.rows() != n { m.rows() } else { m.cols() } });
            }
        }
        Ok(ComplementarityMap { relation, t, s })
    }

    pub fn dim(&self) -> usize {
        self.relation.dim()
    }

    /// Is `z ∈ Φ(x)`? Tested as `z - T x ∈ S Λ(F_min(x))` with the image cone
    /// in generator form.
    pub fn phi_membership(&self, x: &Vector<T>, z: &Vector<T>) -> Result<bool> {
        let rel = &self.relation;
        let face = minimal_face(&rel.base, &rel.lattice, x)?;
        let idx = rel.lattice.index_of(&face.active_set).expect("face of this lattice");
        let g = rel.assignment[idx].generators();
        let rays: Vec<Vector<T>> = g.rays.iter().map(|r| self.s.mul_vec(r)).collect();
        let lin: Vec<Vector<T>> = g.lineality.iter().map(|r| self.s.mul_vec(r)).collect();
        Ok(in_generated_cone(&rays, &lin, &z.sub(&self.t.mul_vec(x)), self.dim()))
    }

    /// `T L(F) ⊕ S L(Λ(F)) = R^n` at every face; returns the first face where
    /// it fails.
    pub fn nonsingular_violation(&self) -> Option<usize> {
        let n = self.dim();
        let rel = &self.relation;
        (0..rel.lattice.len()).find(|&i| {
            let face = &rel.lattice.faces[i];
            let lam = rel.assignment[i].span();
            if face.span_basis.len() + lam.len() != n {
                return true;
            }
            let mut cols: Vec<Vector<T>> = face.span_basis.iter().map(|b| self.t.mul_vec(b)).collect();
            cols.extend(lam.iter().map(|b| self.s.mul_vec(b)));
            crate::linalg::rank_of(&cols, n) != n
        })
    }
}

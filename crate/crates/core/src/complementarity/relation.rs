use super::pair::{ConePair, FaceMapEntry};
use crate::error::{PolyregError, Result};
use crate::linalg::{rank_of, Matrix, Vector};
use crate::polyhedra::{normal_cone, tangent_cone, FaceLattice, HPolyhedron, PolyCone};
use crate::scalar::Scalar;

/// An assignment of a polyhedral cone `Λ(F)` to every face `F` of `C`.
#[derive(Clone, Debug)]
pub struct ComplementarityRelation<T> {
    pub base: HPolyhedron<T>,
    pub lattice: FaceLattice<T>,
    /// Aligned with `lattice.faces`.
    pub assignment: Vec<PolyCone<T>>,
}

/// Outcome of a non-singularity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonsingularVerdict {
    pub nonsingular: bool,
    /// Active set of the first face with `L(F) + L(Λ(F)) ≠ R^n`.
    pub first_violation: Option<Vec<usize>>,
}

impl<T: Scalar> ComplementarityRelation<T> {
    pub fn new(base: HPolyhedron<T>, lattice: FaceLattice<T>, assignment: Vec<PolyCone<T>>) -> Result<Self> {
        if assignment.len() != lattice.len() {
            return Err(PolyregError::MalformedRelation(format!(
                "{} cones for {} faces",
                assignment.len(),
                lattice.len()
            )));
        }
        if let Some(bad) = assignment.iter().find(|c| c.ambient_dim() != base.dim()) {
            return Err(PolyregError::DimensionMismatch { expected: base.dim(), found: bad.ambient_dim() });
        }
        Ok(ComplementarityRelation { base, lattice, assignment })
    }

    /// Builds the assignment from `(active set, cone)` entries.
    pub fn from_keyed(base: HPolyhedron<T>, lattice: FaceLattice<T>, entries: Vec<(Vec<usize>, PolyCone<T>)>) -> Result<Self> {
        let mut slots: Vec<Option<PolyCone<T>>> = vec![None; lattice.len()];
        for (key, cone) in entries {
            let i = lattice
                .index_of(&key)
                .ok_or_else(|| PolyregError::MalformedRelation(format!("{key:?} is not a face key")))?;
            if slots[i].replace(cone).is_some() {
                return Err(PolyregError::MalformedRelation(format!("face {key:?} listed twice")));
            }
        }
        let assignment = slots
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| {
                    PolyregError::MalformedRelation(format!("face {:?} has no cone", lattice.faces[i].active_set))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, lattice, assignment)
    }

    pub fn lambda(&self, face: usize) -> &PolyCone<T> {
        &self.assignment[face]
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// First covering pair `F ⊂ F'` with `Λ(F') ⊄ Λ(F)`.
    pub fn antitone_violation(&self) -> Option<(usize, usize)> {
        self.lattice
            .covering_pairs
            .iter()
            .copied()
            .find(|&(i, j)| !self.assignment[j].is_subset_of(&self.assignment[i]))
    }

    /// `L(F) ⊕ L(Λ(F)) = R^n` for every face.
    pub fn check_nonsingular(&self) -> NonsingularVerdict {
        let n = self.dim();
        for (face, cone) in self.lattice.faces.iter().zip(&self.assignment) {
            let lam_span = cone.span();
            let mut all = face.span_basis.clone();
            all.extend(lam_span.iter().cloned());
            if face.span_basis.len() + lam_span.len() != n || rank_of(&all, n) != n {
                return NonsingularVerdict { nonsingular: false, first_violation: Some(face.active_set.clone()) };
            }
        }
        NonsingularVerdict { nonsingular: true, first_violation: None }
    }

    /// Faces of `C` that contain face `fbar`.
    pub fn faces_above(&self, fbar: usize) -> Vec<usize> {
        (0..self.lattice.len()).filter(|&i| self.lattice.contains(fbar, i)).collect()
    }

    /// `K = T(C, F̄)`, `H = Λ(F̄)`, with `F + L(F̄) ↦ Λ(F)` for `F ⊇ F̄`.
    pub fn tangential_extension(&self, fbar: usize) -> Result<ConePair<T>> {
        let face_bar = &self.lattice.faces[fbar];
        let k = tangent_cone(&self.base, face_bar).converted();
        let h = self.assignment[fbar].converted();
        let entries = self
            .faces_above(fbar)
            .into_iter()
            .map(|i| {
                let f = &self.lattice.faces[i];
                let k_face = tangent_face(&self.base, face_bar, f);
                FaceMapEntry { k_face, h_face: self.assignment[i].clone(), origin: Some(f.active_set.clone()) }
            })
            .collect();
        ConePair::from_cone_map(k, h, entries)
    }

    /// The factorized pair in `M = L(Λ(F̄))`, in coordinates of a basis of `M`.
    pub fn factorization(&self, fbar: usize) -> Result<ConePair<T>> {
        let verdict = self.check_nonsingular();
        if let Some(face) = verdict.first_violation {
            return Err(PolyregError::SingularRelation(face));
        }
        let n = self.dim();
        let face_bar = &self.lattice.faces[fbar];
        let l_basis = face_bar.span_basis.clone();
        let m_basis = self.assignment[fbar].span();
        let proj = SplitProjection::new(&l_basis, &m_basis, n);

        let t = tangent_cone(&self.base, face_bar);
        let k = proj.cone(&t);
        let h = self.assignment[fbar].in_coordinates(&m_basis)?;
        let mut entries = Vec::new();
        for i in self.faces_above(fbar) {
            let f = &self.lattice.faces[i];
            let k_face = proj.cone(&tangent_face(&self.base, face_bar, f));
            let h_face = proj.cone(&self.assignment[i]);
            entries.push(FaceMapEntry { k_face, h_face, origin: Some(f.active_set.clone()) });
        }
        ConePair::from_cone_map(k.converted(), h.converted(), entries)
    }
}

/// The face `F + L(F̄)` of `T(C, F̄)` belonging to `F ⊇ F̄`.
fn tangent_face<T: Scalar>(c: &HPolyhedron<T>, fbar: &crate::polyhedra::Face<T>, f: &crate::polyhedra::Face<T>) -> PolyCone<T> {
    let mut rows: Vec<Vector<T>> = fbar.active_set.iter().map(|&i| c.row(i).clone()).collect();
    rows.extend(f.active_set.iter().map(|&i| c.row(i).neg()));
    PolyCone::from_h(c.dim(), rows)
}

/// Projection onto `M` parallel to `L` for `L ⊕ M = R^n`, returning
/// coordinates in the given basis of `M`.
struct SplitProjection<T> {
    basis: Matrix<T>,
    l_dim: usize,
    m_dim: usize,
}

impl<T: Scalar> SplitProjection<T> {
    fn new(l_basis: &[Vector<T>], m_basis: &[Vector<T>], n: usize) -> Self {
        let mut cols = l_basis.to_vec();
        cols.extend(m_basis.iter().cloned());
        SplitProjection { basis: Matrix::from_columns(&cols, n), l_dim: l_basis.len(), m_dim: m_basis.len() }
    }

    fn coords(&self, v: &Vector<T>) -> Vector<T> {
        let (c, _) = self
            .basis
            .solve_linear(v)
            .expect("dimensions agree")
            .expect("L and M together span the space");
        c.iter().skip(self.l_dim).cloned().collect()
    }

    fn cone(&self, k: &PolyCone<T>) -> PolyCone<T> {
        let g = k.generators();
        PolyCone::from_v(
            self.m_dim,
            g.rays.iter().map(|r| self.coords(r)).collect(),
            g.lineality.iter().map(|r| self.coords(r)).collect(),
        )
    }
}

/// `F ↦ N(C, F)`.
pub fn canonical_normal_relation<T: Scalar>(c: &HPolyhedron<T>, lattice: &FaceLattice<T>) -> ComplementarityRelation<T> {
    let assignment = lattice.faces.iter().map(|f| normal_cone(c, f)).collect();
    ComplementarityRelation { base: c.clone(), lattice: lattice.clone(), assignment }
}

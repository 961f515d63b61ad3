//! Exact all-solutions solver for `z ∈ A x + N(C, x)` and the normal map.
//!
//! Faces partition `C` by their relative interiors and the normal cone is
//! constant on each, so the solution set is the disjoint union over faces `F`
//! of `{x ∈ ri F : z - A x ∈ N(C, F)}`.

mod stress;

pub use stress::{stress_samples, StressConfig};

use crate::complementarity::{canonical_normal_relation, ComplementarityRelation};
use crate::error::{PolyregError, Result};
use crate::linalg::{lp_feasible, lp_maximize, lp_minimize, Constraint, LpOutcome, Matrix, Vector};
use crate::polyhedra::{enumerate_faces, project_with, tangent_cone, FaceLattice, HPolyhedron};
use crate::scalar::Scalar;

/// Per-face data that does not depend on `z`.
#[derive(Clone, Debug)]
struct FacePlan<T> {
    /// Rays of `T(C, F)`; `z - A x ∈ N(C, F)` iff `⟨g, z - A x⟩ <= 0` for
    /// each of them and `z - A x ⊥ L(F)`.
    tangent_rays: Vec<Vector<T>>,
    /// `x = P z + q` when `Bᵀ A B` is invertible for a basis `B` of `L(F)`.
    affine: Option<(Matrix<T>, Vector<T>)>,
}

/// `z ∈ A x + N(C, x)` over a nonempty polyhedron.
#[derive(Clone, Debug)]
pub struct AviInstance<T> {
    pub a: Matrix<T>,
    pub c: HPolyhedron<T>,
    pub lattice: FaceLattice<T>,
    pub relation: ComplementarityRelation<T>,
    plans: Vec<FacePlan<T>>,
}

/// Solutions attributed to one face.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionPiece<T> {
    /// Index into the instance lattice.
    pub face: usize,
    pub face_active_set: Vec<usize>,
    /// A solution with `F_min(witness) = F`.
    pub witness: Vector<T>,
    /// `{x ∈ F : z - A x ∈ N(C, F)}`; the solutions on this face are the
    /// points of this set in `ri F`.
    pub piece: HPolyhedron<T>,
    pub single_point: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolutionCount<T> {
    None,
    Unique(Vector<T>),
    Multiple,
}

impl<T> SolutionCount<T> {
    pub fn is_unique(&self) -> bool {
        matches!(self, SolutionCount::Unique(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolutionCount::None => "0",
            SolutionCount::Unique(_) => "1",
            SolutionCount::Multiple => ">=2",
        }
    }
}

/// Counts the solutions encoded by the output of [`solve_all`].
pub fn count_solutions<T: Scalar>(pieces: &[SolutionPiece<T>]) -> SolutionCount<T> {
    match pieces {
        [] => SolutionCount::None,
        [p] if p.single_point => SolutionCount::Unique(p.witness.clone()),
        _ => SolutionCount::Multiple,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingleValuedVerdict<T> {
    pub single_valued: bool,
    /// A sample with no solution or with several, and its count label.
    pub counterexample: Option<(Vector<T>, &'static str)>,
    pub samples_checked: usize,
}

impl<T: Scalar> AviInstance<T> {
    pub fn new(a: Matrix<T>, c: HPolyhedron<T>) -> Result<Self> {
        let lattice = enumerate_faces(&c)?;
        Self::with_lattice(a, c, lattice)
    }

    pub fn with_lattice(a: Matrix<T>, c: HPolyhedron<T>, lattice: FaceLattice<T>) -> Result<Self> {
        let n = c.dim();
        if !a.is_square() {
            return Err(PolyregError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if a.rows() != n {
            return Err(PolyregError::DimensionMismatch { expected: n, found: a.rows() });
        }
        let relation = canonical_normal_relation(&c, &lattice);
        let plans = lattice
            .faces
            .iter()
            .map(|face| {
                let tangent_rays = tangent_cone(&c, face).generators().rays.clone();
                let affine = if face.span_basis.is_empty() {
                    Some((Matrix::zeros(n, n), face.ri_point.clone()))
                } else {
                    let b = Matrix::from_columns(&face.span_basis, n);
                    let bt = b.transpose();
                    bt.mul(&a).mul(&b).inverse().expect("square").map(|g_inv| {
                        let p = b.mul(&g_inv).mul(&bt);
                        let q = face.ri_point.sub(&p.mul_vec(&a.mul_vec(&face.ri_point)));
                        (p, q)
                    })
                };
                FacePlan { tangent_rays, affine }
            })
            .collect();
        Ok(AviInstance { a, c, lattice, relation, plans })
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    fn strictly_in_face(&self, face: usize, x: &Vector<T>) -> bool {
        let active = &self.lattice.faces[face].active_set;
        (0..self.c.len()).all(|j| {
            let v = self.c.row(j).dot(x);
            if active.binary_search(&j).is_ok() {
                v.eq_tol(self.c.rhs(j))
            } else {
                v.lt_tol(self.c.rhs(j))
            }
        })
    }

    /// Closed description of `{x ∈ F : z - A x ∈ N(C, F)}`.
    pub fn piece(&self, face: usize, z: &Vector<T>) -> HPolyhedron<T> {
        let f = &self.lattice.faces[face];
        let at = self.a.transpose();
        let mut ineqs: Vec<(Vector<T>, T)> = Vec::new();
        for j in 0..self.c.len() {
            ineqs.push((self.c.row(j).clone(), self.c.rhs(j).clone()));
        }
        for &i in &f.active_set {
            ineqs.push((self.c.row(i).neg(), -self.c.rhs(i).clone()));
        }
        for g in &self.plans[face].tangent_rays {
            ineqs.push((at.mul_vec(g).neg(), -g.dot(z)));
        }
        for b in &f.span_basis {
            ineqs.push((at.mul_vec(b), b.dot(z)));
            ineqs.push((at.mul_vec(b).neg(), -b.dot(z)));
        }
        HPolyhedron::new(self.dim(), ineqs).expect("rows have the ambient dimension")
    }

    fn solve_face(&self, face: usize, z: &Vector<T>) -> Option<SolutionPiece<T>> {
        let plan = &self.plans[face];
        let active = &self.lattice.faces[face].active_set;
        let make = |witness: Vector<T>, single_point: bool| SolutionPiece {
            face,
            face_active_set: active.clone(),
            witness,
            piece: self.piece(face, z),
            single_point,
        };
        if let Some((p, q)) = &plan.affine {
            let x = p.mul_vec(z).add(q);
            if !self.strictly_in_face(face, &x) {
                return None;
            }
            let w = z.sub(&self.a.mul_vec(&x));
            if plan.tangent_rays.iter().any(|g| g.dot(&w).is_pos()) {
                return None;
            }
            return Some(make(x, true));
        }
        // Singular on L(F): the candidate set is an affine subspace of
        // positive dimension or empty; decide by LP.
        let n = self.dim();
        let piece = self.piece(face, z);
        let mut cons = piece.constraints();
        for j in 0..self.c.len() {
            if active.binary_search(&j).is_err() {
                cons.push(Constraint::lt(self.c.row(j).clone(), self.c.rhs(j).clone()));
            }
        }
        let x = lp_feasible(&cons, n)?;
        let closed = piece.constraints();
        let single_point = (0..n).all(|i| {
            let e = Vector::unit(n, i);
            match (lp_maximize(&e, &closed, n), lp_minimize(&e, &closed, n)) {
                (LpOutcome::Optimal { value: hi, .. }, LpOutcome::Optimal { value: lo, .. }) => hi == lo,
                _ => false,
            }
        });
        Some(SolutionPiece { face, face_active_set: active.clone(), witness: x, piece, single_point })
    }

    /// Every face carrying a solution for `z`, in lattice order.
    pub fn solve_all(&self, z: &Vector<T>) -> Result<Vec<SolutionPiece<T>>> {
        if z.len() != self.dim() {
            return Err(PolyregError::DimensionMismatch { expected: self.dim(), found: z.len() });
        }
        Ok((0..self.lattice.len()).filter_map(|f| self.solve_face(f, z)).collect())
    }

    pub fn count(&self, z: &Vector<T>) -> Result<SolutionCount<T>> {
        Ok(count_solutions(&self.solve_all(z)?))
    }

    /// Scans `samples` for a `z` without exactly one solution.
    pub fn is_single_valued(&self, samples: &[Vector<T>]) -> Result<SingleValuedVerdict<T>> {
        for (i, z) in samples.iter().enumerate() {
            let c = self.count(z)?;
            if !c.is_unique() {
                return Ok(SingleValuedVerdict {
                    single_valued: false,
                    counterexample: Some((z.clone(), c.label())),
                    samples_checked: i + 1,
                });
            }
        }
        Ok(SingleValuedVerdict { single_valued: true, counterexample: None, samples_checked: samples.len() })
    }

    /// Largest `‖x(z) - x(z')‖² / ‖z - z'‖²` over the given pairs.
    pub fn lipschitz_estimate(&self, pairs: &[(Vector<T>, Vector<T>)]) -> Result<T> {
        let mut best = T::zero();
        for (z, w) in pairs {
            let d = z.sub(w).norm_sq();
            if d.is_negligible() {
                continue;
            }
            let (xz, xw) = (self.unique_solution(z)?, self.unique_solution(w)?);
            let ratio = xz.sub(&xw).norm_sq() / d;
            if ratio > best {
                best = ratio;
            }
        }
        Ok(best)
    }

    pub fn unique_solution(&self, z: &Vector<T>) -> Result<Vector<T>> {
        match self.count(z)? {
            SolutionCount::Unique(x) => Ok(x),
            other => Err(PolyregError::NonUnique { count: other.label().to_string() }),
        }
    }

    /// `A Π_C(y) + y - Π_C(y)`.
    pub fn normal_map_eval(&self, y: &Vector<T>) -> Result<Vector<T>> {
        let p = project_with(&self.c, &self.lattice, y)?;
        Ok(self.a.mul_vec(&p).add(&y.sub(&p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(p: i64) -> Rational {
        Rational::from_ratio(p, 1)
    }

    #[test]
    fn scalar_lcp() {
        let inst = AviInstance::new(Matrix::from_ints(1, 1, &[1]), HPolyhedron::<Rational>::orthant(1)).unwrap();
        assert_eq!(inst.count(&Vector::from_ints(&[-1])).unwrap(), SolutionCount::Unique(Vector::from_ints(&[0])));
        assert_eq!(inst.count(&Vector::from_ints(&[3])).unwrap(), SolutionCount::Unique(Vector::from_ints(&[3])));
    }

    #[test]
    fn negative_scalar_folds() {
        let inst = AviInstance::new(Matrix::from_ints(1, 1, &[-1]), HPolyhedron::<Rational>::orthant(1)).unwrap();
        assert_eq!(inst.count(&Vector::from_ints(&[-1])).unwrap(), SolutionCount::Multiple);
        assert_eq!(inst.count(&Vector::from_ints(&[1])).unwrap(), SolutionCount::None);
    }

    #[test]
    fn identity_is_projection() {
        let c = HPolyhedron::boxed(&[q(0), q(0)], &[q(1), q(2)]);
        let inst = AviInstance::new(Matrix::identity(2), c.clone()).unwrap();
        for z in [[-1, 5], [3, 1], [0, 0], [1, 1]] {
            let z = Vector::from_ints(&z);
            let x = inst.unique_solution(&z).unwrap();
            assert_eq!(x, crate::polyhedra::project(&c, &z).unwrap());
            assert_eq!(inst.normal_map_eval(&z).unwrap(), z);
        }
    }

    #[test]
    fn non_p_matrix_grid() {
        let inst = AviInstance::new(Matrix::from_ints(2, 2, &[0, -1, -1, 0]), HPolyhedron::<Rational>::orthant(2)).unwrap();
        let mut bad = 0;
        for a in -2..=2 {
            for b in -2..=2 {
                if !inst.count(&Vector::from_ints(&[a, b])).unwrap().is_unique() {
                    bad += 1;
                }
            }
        }
        assert!(bad > 0);
    }

    #[test]
    fn zero_matrix_gives_whole_pieces() {
        let inst = AviInstance::new(Matrix::zeros(1, 1), HPolyhedron::<Rational>::orthant(1)).unwrap();
        assert_eq!(inst.count(&Vector::from_ints(&[0])).unwrap(), SolutionCount::Multiple);
        assert_eq!(inst.count(&Vector::from_ints(&[-1])).unwrap(), SolutionCount::Unique(Vector::from_ints(&[0])));
    }

    #[test]
    fn lipschitz_of_double() {
        let inst = AviInstance::new(Matrix::scalar(2, q(2)), HPolyhedron::<Rational>::whole_space(2)).unwrap();
        let pairs = vec![(Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 3]))];
        assert_eq!(inst.lipschitz_estimate(&pairs).unwrap(), Rational::from_ratio(1, 4));
    }
}

//! Faces of an H-polyhedron, keyed by their maximal active index sets.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::cone::PolyCone;
use super::hpoly::HPolyhedron;
use crate::error::{PolyregError, Result};
use crate::linalg::{lp_feasible, lp_maximize, Constraint, LpOutcome, Vector};
use crate::scalar::Scalar;

/// A nonempty face `F = {x ∈ C : ⟨y_i, x⟩ = α_i, i ∈ active_set}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Face<T> {
    /// Sorted, maximal: every inequality tight on all of `F` is listed.
    pub active_set: Vec<usize>,
    pub dim: usize,
    /// Basis of `L(F) = span(F - F)`.
    pub span_basis: Vec<Vector<T>>,
    /// Satisfies the listed inequalities with equality and all others strictly.
    pub ri_point: Vector<T>,
}

/// All faces of a polyhedron, sorted lexicographically by active set.
#[derive(Clone, Debug)]
pub struct FaceLattice<T> {
    pub n: usize,
    pub faces: Vec<Face<T>>,
    /// `(i, j)` with `F_i ⊂ F_j` and `dim F_j = dim F_i + 1`.
    pub covering_pairs: Vec<(usize, usize)>,
    /// `containment[i][j]` iff `F_i ⊆ F_j`.
    pub containment: Vec<Vec<bool>>,
    top: usize,
}

impl<T: Scalar> FaceLattice<T> {
    fn assemble(n: usize, mut faces: Vec<Face<T>>) -> Self {
        faces.sort_by(|a, b| a.active_set.cmp(&b.active_set));
        let m = faces.len();
        let sets: Vec<BTreeSet<usize>> = faces.iter().map(|f| f.active_set.iter().copied().collect()).collect();
        let containment: Vec<Vec<bool>> =
            (0..m).map(|i| (0..m).map(|j| sets[j].is_subset(&sets[i])).collect()).collect();
        let mut covering_pairs = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j && containment[i][j] && faces[j].dim == faces[i].dim + 1 {
                    covering_pairs.push((i, j));
                }
            }
        }
        let top = (0..m).max_by_key(|&i| faces[i].dim).unwrap_or(0);
        FaceLattice { n, faces, covering_pairs, containment, top }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Index of the face with the given (sorted) active set.
    pub fn index_of(&self, active: &[usize]) -> Option<usize> {
        self.faces.binary_search_by(|f| f.active_set.as_slice().cmp(active)).ok()
    }

    /// Index of `C` itself.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn face(&self, i: usize) -> &Face<T> {
        &self.faces[i]
    }

    /// `F_i ⊆ F_j`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.containment[i][j]
    }

    /// Pairs `(i, j)` with `F_i ⊆ F_j`, including `i = j`.
    pub fn nested_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.len();
        (0..m).flat_map(|i| (0..m).filter(move |&j| self.containment[i][j]).map(move |j| (i, j))).collect()
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.faces[i].dim == 0).collect()
    }

    /// Faces with no proper subface.
    pub fn minimal_faces(&self) -> Vec<usize> {
        let m = self.len();
        (0..m).filter(|&i| (0..m).all(|j| j == i || !self.containment[j][i])).collect()
    }

    /// Canonical keys, dimensions and containment, for oracle comparisons.
    pub fn signature(&self) -> (Vec<(Vec<usize>, usize)>, Vec<Vec<bool>>) {
        (self.faces.iter().map(|f| (f.active_set.clone(), f.dim)).collect(), self.containment.clone())
    }
}

/// The face cut out by forcing the rows in `active` to equality, with its
/// maximal active set and a relative-interior point, or `None` if it is empty.
pub fn closure<T: Scalar>(c: &HPolyhedron<T>, active: &[usize]) -> Option<Face<T>> {
    let n = c.dim();
    let k = c.len();
    if c.is_trivially_empty() {
        return None;
    }
    let fixed: BTreeSet<usize> = active.iter().copied().collect();
    let free: Vec<usize> = (0..k).filter(|j| !fixed.contains(j)).collect();

    // Shared slack: maximize s with ⟨y_j, x⟩ + s <= α_j on the free rows.
    let mut cons: Vec<Constraint<T>> = Vec::with_capacity(k + 1);
    for &i in &fixed {
        cons.push(Constraint::eq(extend(c.row(i), T::zero()), c.rhs(i).clone()));
    }
    for &j in &free {
        cons.push(Constraint::le(extend(c.row(j), T::one()), c.rhs(j).clone()));
    }
    cons.push(Constraint::le(Vector::unit(n + 1, n), T::one()));
    let (point, value) = match lp_maximize(&Vector::unit(n + 1, n), &cons, n + 1) {
        LpOutcome::Optimal { point, value } => (point, value),
        LpOutcome::Infeasible => return None,
        LpOutcome::Unbounded => unreachable!("slack is capped"),
    };
    if value.is_neg() {
        return None;
    }
    let first: Vector<T> = point.iter().take(n).cloned().collect();
    if value.is_pos() || free.is_empty() {
        return Some(make_face(c, fixed.into_iter().collect(), first));
    }

    // Some free row is an implicit equality. Sum-of-capped-slacks LPs split
    // the free rows into those with a strictly feasible point and the rest.
    let mut unknown = free;
    let mut points = vec![first];
    loop {
        let u = unknown.len();
        let vars = n + u;
        let mut cons: Vec<Constraint<T>> = Vec::with_capacity(k + 2 * u);
        for i in 0..k {
            let mut coeffs: Vec<T> = c.row(i).iter().cloned().collect();
            coeffs.extend((0..u).map(|_| T::zero()));
            if let Some(p) = unknown.iter().position(|&j| j == i) {
                coeffs[n + p] = T::one();
            }
            let rel = if fixed.contains(&i) { Constraint::eq } else { Constraint::le };
            cons.push(rel(Vector::new(coeffs), c.rhs(i).clone()));
        }
        for p in 0..u {
            cons.push(Constraint::le(Vector::unit(vars, n + p), T::one()));
            cons.push(Constraint::ge(Vector::unit(vars, n + p), T::zero()));
        }
        let obj: Vector<T> = (0..vars).map(|v| if v < n { T::zero() } else { T::one() }).collect();
        let LpOutcome::Optimal { point, value } = lp_maximize(&obj, &cons, vars) else {
            unreachable!("face is known to be nonempty and slacks are capped")
        };
        if !value.is_pos() {
            break;
        }
        let slack_positive: Vec<usize> = (0..u).filter(|&p| point[n + p].is_pos()).collect();
        points.push(point.iter().take(n).cloned().collect());
        unknown = (0..u).filter(|p| !slack_positive.contains(p)).map(|p| unknown[p]).collect();
        if unknown.is_empty() {
            break;
        }
    }
    let count = T::from_usize(points.len()).expect("small count");
    let ri = Vector::sum(&points, n).scale(&(T::one() / count));
    let mut full: Vec<usize> = fixed.into_iter().chain(unknown).collect();
    full.sort_unstable();
    Some(make_face(c, full, ri))
}

fn extend<T: Scalar>(v: &Vector<T>, last: T) -> Vector<T> {
    v.iter().cloned().chain(std::iter::once(last)).collect()
}

fn make_face<T: Scalar>(c: &HPolyhedron<T>, active_set: Vec<usize>, ri_point: Vector<T>) -> Face<T> {
    let span_basis = c.direction_space(&active_set);
    Face { dim: span_basis.len(), active_set, span_basis, ri_point }
}

/// Breadth-first enumeration from `C` downwards, tightening one inequality
/// at a time and canonicalizing through [`closure`].
pub fn enumerate_faces<T: Scalar>(c: &HPolyhedron<T>) -> Result<FaceLattice<T>> {
    let top = closure(c, &[]).ok_or(PolyregError::EmptySet)?;
    let k = c.len();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut tried: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut faces = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(top.active_set.clone());
    queue.push_back(top);
    while let Some(face) = queue.pop_front() {
        for j in 0..k {
            if face.active_set.binary_search(&j).is_ok() {
                continue;
            }
            let mut cand = face.active_set.clone();
            cand.push(j);
            cand.sort_unstable();
            if !tried.insert(cand.clone()) {
                continue;
            }
            if let Some(sub) = closure(c, &cand) {
                if seen.insert(sub.active_set.clone()) {
                    queue.push_back(sub);
                }
            }
        }
        faces.push(face);
    }
    Ok(FaceLattice::assemble(c.dim(), faces))
}

/// Oracle enumerator: tests every subset `I ⊆ {0..k}` for a point with
/// exactly the rows in `I` tight.
pub fn brute_force_faces<T: Scalar>(c: &HPolyhedron<T>) -> Result<FaceLattice<T>> {
    if c.is_empty() {
        return Err(PolyregError::EmptySet);
    }
    let k = c.len();
    let n = c.dim();
    let mut faces = Vec::new();
    for mask in 0u64..(1u64 << k) {
        let active: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let cons: Vec<Constraint<T>> = (0..k)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Constraint::eq(c.row(i).clone(), c.rhs(i).clone())
                } else {
                    Constraint::lt(c.row(i).clone(), c.rhs(i).clone())
                }
            })
            .collect();
        if let Some(x) = lp_feasible(&cons, n) {
            faces.push(make_face(c, active, x));
        }
    }
    Ok(FaceLattice::assemble(n, faces))
}

/// The face containing `x` in its relative interior.
pub fn minimal_face<'a, T: Scalar>(c: &HPolyhedron<T>, lattice: &'a FaceLattice<T>, x: &Vector<T>) -> Result<&'a Face<T>> {
    if !c.contains(x) {
        return Err(PolyregError::NotInSet);
    }
    let active = c.active_set(x);
    lattice
        .index_of(&active)
        .map(|i| &lattice.faces[i])
        .ok_or_else(|| PolyregError::MalformedRelation("lattice does not belong to this polyhedron".into()))
}

/// `T(C, F) = {h : ⟨y_i, h⟩ <= 0, i ∈ I(F)}`.
pub fn tangent_cone<T: Scalar>(c: &HPolyhedron<T>, face: &Face<T>) -> PolyCone<T> {
    PolyCone::from_h(c.dim(), face.active_set.iter().map(|&i| c.row(i).clone()).collect())
}

/// `N(C, F) = cone{y_i : i ∈ I(F)}`, in generator form.
pub fn normal_cone<T: Scalar>(c: &HPolyhedron<T>, face: &Face<T>) -> PolyCone<T> {
    PolyCone::from_v(c.dim(), face.active_set.iter().map(|&i| c.row(i).clone()).collect(), Vec::new())
}

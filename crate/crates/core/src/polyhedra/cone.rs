use std::sync::OnceLock;

use super::dd::{h_to_v, v_to_h, Generators};
use super::hpoly::HPolyhedron;
use super::lattice::{enumerate_faces, FaceLattice};
use crate::error::{PolyregError, Result};
use crate::linalg::{lp_feasible, lp_maximize, orthogonal_complement, rank_of, span_basis, Constraint, LpOutcome, Matrix, Vector};
use crate::scalar::Scalar;

/// Polyhedral cone carrying an inequality form, a generator form, or both.
/// The missing form is computed on first use and cached.
#[derive(Clone, Debug)]
pub struct PolyCone<T> {
    n: usize,
    h: OnceLock<Vec<Vector<T>>>,
    v: OnceLock<Generators<T>>,
}

impl<T: Scalar> PolyCone<T> {
    /// `{x : ⟨a, x⟩ <= 0, a ∈ rows}`.
    pub fn from_h(n: usize, rows: Vec<Vector<T>>) -> Self {
        let rows: Vec<Vector<T>> = rows.into_iter().filter(|r| !r.is_zero()).collect();
        debug_assert!(rows.iter().all(|r| r.len() == n));
        PolyCone { n, h: OnceLock::from(rows), v: OnceLock::new() }
    }

    /// `cone(rays) + span(lineality)`.
    pub fn from_v(n: usize, rays: Vec<Vector<T>>, lineality: Vec<Vector<T>>) -> Self {
        let rays: Vec<Vector<T>> = rays.into_iter().filter(|r| !r.is_zero()).collect();
        let lineality: Vec<Vector<T>> = lineality.into_iter().filter(|r| !r.is_zero()).collect();
        debug_assert!(rays.iter().chain(&lineality).all(|r| r.len() == n));
        PolyCone { n, h: OnceLock::new(), v: OnceLock::from(Generators { rays, lineality }) }
    }

    /// Builds a cone with both forms supplied. The caller guarantees they agree.
    pub fn from_both(n: usize, rows: Vec<Vector<T>>, gens: Generators<T>) -> Self {
        PolyCone { n, h: OnceLock::from(rows), v: OnceLock::from(gens) }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_v(n, Vec::new(), Vec::new())
    }

    pub fn whole(n: usize) -> Self {
        Self::from_h(n, Vec::new())
    }

    pub fn subspace(n: usize, basis: Vec<Vector<T>>) -> Self {
        Self::from_v(n, Vec::new(), basis)
    }

    pub fn orthant(n: usize) -> Self {
        Self::from_h(n, (0..n).map(|i| Vector::unit(n, i).neg()).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn has_h(&self) -> bool {
        self.h.get().is_some()
    }

    pub fn has_v(&self) -> bool {
        self.v.get().is_some()
    }

    /// Inequality rows (computed from generators if needed).
    pub fn h_rows(&self) -> &[Vector<T>] {
        self.h.get_or_init(|| {
            let gens = self.v.get().expect("cone has at least one form");
            v_to_h(self.n, gens)
        })
    }

    /// Generators (computed from inequalities if needed).
    pub fn generators(&self) -> &Generators<T> {
        self.v.get_or_init(|| {
            let rows = self.h.get().expect("cone has at least one form");
            h_to_v(self.n, rows)
        })
    }

    /// Both forms, with the cached ones forced.
    pub fn converted(&self) -> Self {
        self.h_rows();
        self.generators();
        self.clone()
    }

    pub fn contains(&self, x: &Vector<T>) -> bool {
        x.len() == self.n && self.h_rows().iter().all(|a| !a.dot(x).is_pos())
    }

    /// Membership by an LP over generator weights; independent of the
    /// inequality form.
    pub fn contains_by_generators(&self, x: &Vector<T>) -> bool {
        in_generated_cone(&self.generators().rays, &self.generators().lineality, x, self.n)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.generators().all_directions().iter().all(|g| other.contains(g))
    }

    pub fn set_eq(&self, other: &Self) -> bool {
        self.n == other.n && self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// `K° = {y : ⟨y, x⟩ <= 0 ∀ x ∈ K}`; forms swap roles.
    pub fn polar(&self) -> Self {
        let h = self.v.get().map(|g| g.all_directions());
        let v = self.h.get().map(|rows| Generators { rays: rows.clone(), lineality: Vec::new() });
        let out = PolyCone { n: self.n, h: OnceLock::new(), v: OnceLock::new() };
        if let Some(h) = h {
            let _ = out.h.set(h);
        }
        if let Some(v) = v {
            let _ = out.v.set(v);
        }
        out
    }

    /// Basis of `lin K = K ∩ (-K)`.
    pub fn lineality(&self) -> Vec<Vector<T>> {
        let rows = self.h_rows();
        if rows.is_empty() {
            return (0..self.n).map(|i| Vector::unit(self.n, i)).collect();
        }
        Matrix::from_rows(rows, self.n).kernel_basis()
    }

    /// Basis of `L(K) = span(K - K)`.
    pub fn span(&self) -> Vec<Vector<T>> {
        span_basis(&self.generators().spanning(), self.n)
    }

    pub fn dim(&self) -> usize {
        rank_of(&self.generators().spanning(), self.n)
    }

    /// A point of the relative interior: the sum of the rays.
    pub fn ri_point(&self) -> Vector<T> {
        Vector::sum(&self.generators().rays, self.n)
    }

    pub fn is_trivial(&self) -> bool {
        let g = self.generators();
        g.rays.is_empty() && g.lineality.is_empty()
    }

    /// Decides `K = {0}` by maximizing `±x_i` over `K ∩ [-1, 1]^n`; returns a
    /// nonzero witness when the cone is not trivial.
    pub fn nonzero_witness(&self) -> Option<Vector<T>> {
        nonzero_in_cone(self.h_rows(), self.n)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let a = self.generators();
        let b = other.generators();
        let mut rays = a.rays.clone();
        rays.extend(b.rays.iter().cloned());
        let mut lin = a.lineality.clone();
        lin.extend(b.lineality.iter().cloned());
        Self::from_v(self.n, rays, lin)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut rows = self.h_rows().to_vec();
        rows.extend(other.h_rows().iter().cloned());
        Self::from_h(self.n, rows)
    }

    /// `K - H = K + (-H)`.
    pub fn minus(&self, other: &Self) -> Self {
        self.sum(&other.negated())
    }

    pub fn negated(&self) -> Self {
        let out = PolyCone { n: self.n, h: OnceLock::new(), v: OnceLock::new() };
        if let Some(h) = self.h.get() {
            let _ = out.h.set(h.iter().map(|r| r.neg()).collect());
        }
        if let Some(g) = self.v.get() {
            let _ = out.v.set(Generators {
                rays: g.rays.iter().map(|r| r.neg()).collect(),
                lineality: g.lineality.clone(),
            });
        }
        out
    }

    /// Image `M(K)` in generator form.
    pub fn image(&self, m: &Matrix<T>) -> Self {
        let g = self.generators();
        Self::from_v(
            m.rows(),
            g.rays.iter().map(|r| m.mul_vec(r)).collect(),
            g.lineality.iter().map(|r| m.mul_vec(r)).collect(),
        )
    }

    /// Preimage `{x : M x ∈ K}` in inequality form.
    pub fn preimage(&self, m: &Matrix<T>) -> Self {
        let mt = m.transpose();
        Self::from_h(m.cols(), self.h_rows().iter().map(|a| mt.mul_vec(a)).collect())
    }

    /// The face with inequality rows `active` tight, in inequality form.
    pub fn face_cone(&self, active: &[usize]) -> Self {
        let rows = self.h_rows();
        let mut out = rows.to_vec();
        for &i in active {
            out.push(rows[i].neg());
        }
        Self::from_h(self.n, out)
    }

    /// Generators of a face read off the cone's own generators.
    pub fn face_generators(&self, active: &[usize]) -> Generators<T> {
        let rows = self.h_rows();
        let g = self.generators();
        Generators {
            rays: g.rays.iter().filter(|r| active.iter().all(|&i| rows[i].dot(r).is_negligible())).cloned().collect(),
            lineality: g.lineality.clone(),
        }
    }

    pub fn as_hpolyhedron(&self) -> HPolyhedron<T> {
        HPolyhedron::cone(self.n, self.h_rows().to_vec()).expect("rows have the ambient dimension")
    }

    pub fn lattice(&self) -> Result<FaceLattice<T>> {
        enumerate_faces(&self.as_hpolyhedron())
    }

    /// Coordinates in a basis: `K ∩ span(basis)` expressed in that basis.
    /// Fails when a generator leaves the subspace.
    pub fn in_coordinates(&self, basis: &[Vector<T>]) -> Result<Self> {
        let m = basis.len();
        let b = Matrix::from_columns(basis, self.n);
        let coords = |v: &Vector<T>| -> Result<Vector<T>> {
            match b.solve_linear(v)? {
                Some((x, _)) => Ok(x),
                None => Err(PolyregError::Usage("generator is outside the coordinate subspace".into())),
            }
        };
        let g = self.generators();
        let rays = g.rays.iter().map(coords).collect::<Result<Vec<_>>>()?;
        let lin = g.lineality.iter().map(coords).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_v(m, rays, lin))
    }
}

/// `v ∈ cone(rays) + span(lineality)` decided by LP feasibility.
pub fn in_generated_cone<T: Scalar>(rays: &[Vector<T>], lineality: &[Vector<T>], v: &Vector<T>, n: usize) -> bool {
    let vars = rays.len() + lineality.len();
    if vars == 0 {
        return v.is_zero();
    }
    let mut cons = Vec::with_capacity(n + rays.len());
    for i in 0..n {
        let coeffs: Vector<T> = rays.iter().chain(lineality).map(|g| g[i].clone()).collect();
        cons.push(Constraint::eq(coeffs, v[i].clone()));
    }
    for j in 0..rays.len() {
        cons.push(Constraint::ge(Vector::unit(vars, j), T::zero()));
    }
    lp_feasible(&cons, vars).is_some()
}

/// Nonzero point of `{x : ⟨a, x⟩ <= 0}` inside the unit box, or `None` when
/// the cone is `{0}`. Uses up to `2n` LPs.
pub fn nonzero_in_cone<T: Scalar>(rows: &[Vector<T>], n: usize) -> Option<Vector<T>> {
    let mut cons: Vec<Constraint<T>> = rows.iter().map(|a| Constraint::le(a.clone(), T::zero())).collect();
    for i in 0..n {
        cons.push(Constraint::le(Vector::unit(n, i), T::one()));
        cons.push(Constraint::ge(Vector::unit(n, i), -T::one()));
    }
    for i in 0..n {
        for sign in [T::one(), -T::one()] {
            let obj = Vector::unit(n, i).scale(&sign);
            if let LpOutcome::Optimal { point, value } = lp_maximize(&obj, &cons, n) {
                if value.is_pos() {
                    return Some(point);
                }
            }
        }
    }
    None
}

/// `F2 - F1 = F2 + L(F1)` for faces `F1 ⊆ F2` of a cone.
pub fn cone_minus<T: Scalar>(f2: &PolyCone<T>, f1: &PolyCone<T>) -> Result<PolyCone<T>> {
    if !f1.is_subset_of(f2) {
        return Err(PolyregError::Usage("cone_minus requires F1 ⊆ F2".into()));
    }
    let g = f2.generators();
    let mut lin = g.lineality.clone();
    lin.extend(f1.span());
    Ok(PolyCone::from_v(f2.ambient_dim(), g.rays.clone(), lin))
}

/// `L^⊥` as a cone.
pub fn orthogonal_subspace<T: Scalar>(basis: &[Vector<T>], n: usize) -> PolyCone<T> {
    PolyCone::subspace(n, orthogonal_complement(basis, n))
}

use crate::error::{PolyregError, Result};
use crate::linalg::{lp_feasible, lp_maximize, Constraint, LpOutcome, Matrix, Vector};
use crate::scalar::Scalar;

/// `{x ∈ R^n : ⟨y_i, x⟩ <= α_i, i = 1..k}`.
///
/// Zero rows are dropped at construction; a zero row with a negative
/// right-hand side marks the set as empty.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolyhedron<T> {
    n: usize,
    rows: Vec<Vector<T>>,
    rhs: Vec<T>,
    trivially_empty: bool,
}

impl<T: Scalar> HPolyhedron<T> {
    pub fn new(n: usize, inequalities: Vec<(Vector<T>, T)>) -> Result<Self> {
        let mut rows = Vec::with_capacity(inequalities.len());
        let mut rhs = Vec::with_capacity(inequalities.len());
        let mut trivially_empty = false;
        for (y, alpha) in inequalities {
            if y.len() != n {
                return Err(PolyregError::DimensionMismatch { expected: n, found: y.len() });
            }
            if y.is_zero() {
                if alpha.is_neg() {
                    trivially_empty = true;
                }
                continue;
            }
            rows.push(y);
            rhs.push(alpha);
        }
        Ok(HPolyhedron { n, rows, rhs, trivially_empty })
    }

    /// Homogeneous system `{x : ⟨y_i, x⟩ <= 0}`.
    pub fn cone(n: usize, rows: Vec<Vector<T>>) -> Result<Self> {
        Self::new(n, rows.into_iter().map(|y| (y, T::zero())).collect())
    }

    pub fn whole_space(n: usize) -> Self {
        HPolyhedron { n, rows: Vec::new(), rhs: Vec::new(), trivially_empty: false }
    }

    /// `R^n_+` written as `-x_i <= 0`.
    pub fn orthant(n: usize) -> Self {
        let rows = (0..n).map(|i| Vector::unit(n, i).neg()).collect();
        Self::cone(n, rows).expect("well-formed rows")
    }

    /// `{x : lo_i <= x_i <= hi_i}` with rows ordered `-x_0, x_0, -x_1, x_1, ...`.
    pub fn boxed(lo: &[T], hi: &[T]) -> Self {
        let n = lo.len();
        let mut ineqs = Vec::with_capacity(2 * n);
        for i in 0..n {
            ineqs.push((Vector::unit(n, i).neg(), -lo[i].clone()));
            ineqs.push((Vector::unit(n, i), hi[i].clone()));
        }
        Self::new(n, ineqs).expect("well-formed rows")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of stored inequalities `k`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty_description(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_trivially_empty(&self) -> bool {
        self.trivially_empty
    }

    pub fn row(&self, i: usize) -> &Vector<T> {
        &self.rows[i]
    }

    pub fn rhs(&self, i: usize) -> &T {
        &self.rhs[i]
    }

    pub fn rows(&self) -> &[Vector<T>] {
        &self.rows
    }

    pub fn rhs_values(&self) -> &[T] {
        &self.rhs
    }

    pub fn is_cone(&self) -> bool {
        self.rhs.iter().all(|a| a.is_negligible())
    }

    /// Every inequality as an LP constraint.
    pub fn constraints(&self) -> Vec<Constraint<T>> {
        let mut cons: Vec<Constraint<T>> =
            self.rows.iter().zip(&self.rhs).map(|(y, a)| Constraint::le(y.clone(), a.clone())).collect();
        if self.trivially_empty {
            cons.push(Constraint::le(Vector::zeros(self.n), -T::one()));
        }
        cons
    }

    /// Constraints of `F_I = {x ∈ C : ⟨y_i, x⟩ = α_i, i ∈ I}`.
    pub fn face_constraints(&self, active: &[usize]) -> Vec<Constraint<T>> {
        let mut cons = self.constraints();
        for &i in active {
            cons[i].relation = crate::linalg::Relation::Eq;
        }
        cons
    }

    pub fn contains(&self, x: &Vector<T>) -> bool {
        if x.len() != self.n || self.trivially_empty {
            return false;
        }
        self.rows.iter().zip(&self.rhs).all(|(y, a)| y.dot(x).le_tol(a))
    }

    /// `I(x)`: indices of the inequalities tight at `x`.
    pub fn active_set(&self, x: &Vector<T>) -> Vec<usize> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .enumerate()
            .filter(|(_, (y, a))| y.dot(x).eq_tol(a))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.trivially_empty || lp_feasible(&self.constraints(), self.n).is_none()
    }

    pub fn feasible_point(&self) -> Option<Vector<T>> {
        if self.trivially_empty {
            return None;
        }
        lp_feasible(&self.constraints(), self.n)
    }

    /// The rows indexed by `active`, as a matrix.
    pub fn active_matrix(&self, active: &[usize]) -> Matrix<T> {
        let rows: Vec<Vector<T>> = active.iter().map(|&i| self.rows[i].clone()).collect();
        Matrix::from_rows(&rows, self.n)
    }

    /// Basis of `{h : ⟨y_i, h⟩ = 0, i ∈ active}`.
    pub fn direction_space(&self, active: &[usize]) -> Vec<Vector<T>> {
        if active.is_empty() {
            return (0..self.n).map(|i| Vector::unit(self.n, i)).collect();
        }
        self.active_matrix(active).kernel_basis()
    }

    /// `self ⊆ other`? Decided by one LP per row of `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        if self.is_empty() {
            return true;
        }
        let cons = self.constraints();
        for (y, a) in other.rows.iter().zip(&other.rhs) {
            match lp_maximize(y, &cons, self.n) {
                LpOutcome::Optimal { value, .. } => {
                    if !value.le_tol(a) {
                        return false;
                    }
                }
                LpOutcome::Unbounded => return false,
                LpOutcome::Infeasible => return true,
            }
        }
        !other.trivially_empty
    }

    pub fn set_eq(&self, other: &Self) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Image under an invertible linear map `x ↦ M x`: rows become `y M^{-1}`.
    pub fn linear_image(&self, m: &Matrix<T>) -> Result<Self> {
        let inv = m.inverse()?.ok_or_else(|| PolyregError::Usage("map is not invertible".into()))?;
        let inv_t = inv.transpose();
        let ineqs = self.rows.iter().zip(&self.rhs).map(|(y, a)| (inv_t.mul_vec(y), a.clone())).collect();
        let mut out = Self::new(self.n, ineqs)?;
        out.trivially_empty |= self.trivially_empty;
        Ok(out)
    }
}

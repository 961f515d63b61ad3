//! Dense two-phase simplex over an arbitrary [`Scalar`] field.
//!
//! Variables are free; each is split into a difference of two nonnegative
//! columns. Pivoting follows Bland's rule, so the method terminates on
//! degenerate problems, which are the norm for face computations.

use super::vector::Vector;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `a·x <= b`
    Le,
    /// `a·x = b`
    Eq,
    /// `a·x < b`
    Lt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vector<T>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn le(coeffs: Vector<T>, rhs: T) -> Self {
        Constraint { coeffs, relation: Relation::Le, rhs }
    }

    pub fn ge(coeffs: Vector<T>, rhs: T) -> Self {
        Constraint { coeffs: coeffs.neg(), relation: Relation::Le, rhs: -rhs }
    }

    pub fn eq(coeffs: Vector<T>, rhs: T) -> Self {
        Constraint { coeffs, relation: Relation::Eq, rhs }
    }

    pub fn lt(coeffs: Vector<T>, rhs: T) -> Self {
        Constraint { coeffs, relation: Relation::Lt, rhs }
    }

    pub fn gt(coeffs: Vector<T>, rhs: T) -> Self {
        Constraint { coeffs: coeffs.neg(), relation: Relation::Lt, rhs: -rhs }
    }

    /// Exact (or tolerance-aware) check of the constraint at `x`.
    pub fn holds_at(&self, x: &Vector<T>) -> bool {
        let lhs = self.coeffs.dot(x);
        match self.relation {
            Relation::Le => lhs.le_tol(&self.rhs),
            Relation::Eq => lhs.eq_tol(&self.rhs),
            Relation::Lt => lhs.lt_tol(&self.rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { point: Vector<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn point(&self) -> Option<&Vector<T>> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// Maximizes `objective · x` over the constraints. Strict constraints are
/// relaxed to their closures.
pub fn lp_maximize<T: Scalar>(objective: &Vector<T>, constraints: &[Constraint<T>], n: usize) -> LpOutcome<T> {
    assert_eq!(objective.len(), n, "objective has wrong dimension");
    for c in constraints {
        assert_eq!(c.coeffs.len(), n, "constraint has wrong dimension");
    }
    let rows: Vec<(Vec<T>, bool, T)> = constraints
        .iter()
        .map(|c| (c.coeffs.as_slice().to_vec(), c.relation == Relation::Eq, c.rhs.clone()))
        .collect();
    match Tableau::solve(objective.as_slice(), &rows, n) {
        TableauResult::Optimal(x, v) => LpOutcome::Optimal { point: Vector::new(x), value: v },
        TableauResult::Infeasible => LpOutcome::Infeasible,
        TableauResult::Unbounded => LpOutcome::Unbounded,
    }
}

/// Minimizes `objective · x`.
pub fn lp_minimize<T: Scalar>(objective: &Vector<T>, constraints: &[Constraint<T>], n: usize) -> LpOutcome<T> {
    match lp_maximize(&objective.neg(), constraints, n) {
        LpOutcome::Optimal { point, value } => LpOutcome::Optimal { point, value: -value },
        other => other,
    }
}

/// Returns a point satisfying every constraint (strict ones strictly), or
/// `None`. Strict rows share one slack `s <= 1` that is maximized; the system
/// is strictly feasible iff the optimal slack is positive.
pub fn lp_feasible<T: Scalar>(constraints: &[Constraint<T>], n: usize) -> Option<Vector<T>> {
    for c in constraints {
        assert_eq!(c.coeffs.len(), n, "constraint has wrong dimension");
    }
    let has_strict = constraints.iter().any(|c| c.relation == Relation::Lt);
    if !has_strict {
        return lp_maximize(&Vector::zeros(n), constraints, n).point().cloned();
    }
    let m = n + 1;
    let mut rows: Vec<(Vec<T>, bool, T)> = Vec::with_capacity(constraints.len() + 1);
    for c in constraints {
        let mut a = c.coeffs.as_slice().to_vec();
        a.push(if c.relation == Relation::Lt { T::one() } else { T::zero() });
        rows.push((a, c.relation == Relation::Eq, c.rhs.clone()));
    }
    let mut cap = vec![T::zero(); m];
    cap[n] = T::one();
    rows.push((cap.clone(), false, T::one()));
    match Tableau::solve(&cap, &rows, m) {
        TableauResult::Optimal(mut x, s) if s.is_pos() => {
            x.truncate(n);
            Some(Vector::new(x))
        }
        _ => None,
    }
}

enum TableauResult<T> {
    Optimal(Vec<T>, T),
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    a: Vec<Vec<T>>,
    /// Objective row in `z + d·u = v` form; last entry is `v`.
    obj: Vec<T>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: Scalar> Tableau<T> {
    /// `rows` are `(coeffs, is_equality, rhs)` over `n` free variables.
    fn solve(objective: &[T], rows: &[(Vec<T>, bool, T)], n: usize) -> TableauResult<T> {
        let m = rows.len();
        if m == 0 {
            return if objective.iter().all(|c| c.is_negligible()) {
                TableauResult::Optimal(vec![T::zero(); n], T::zero())
            } else {
                TableauResult::Unbounded
            };
        }
        let n_slack = rows.iter().filter(|r| !r.1).count();
        // Column layout: [x+ (n) | x- (n) | slacks | artificials].
        let slack0 = 2 * n;
        let art0 = slack0 + n_slack;
        let mut needs_art = Vec::with_capacity(m);
        let mut slack_of_row = vec![None; m];
        let mut next_slack = slack0;
        for (i, r) in rows.iter().enumerate() {
            if !r.1 {
                slack_of_row[i] = Some(next_slack);
                next_slack += 1;
            }
            let negate = r.2.is_neg();
            needs_art.push(r.1 || negate);
        }
        let n_art = needs_art.iter().filter(|&&b| b).count();
        let cols = art0 + n_art;
        let mut a = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_art = art0;
        for (i, (coeffs, _, rhs)) in rows.iter().enumerate() {
            let mut row = vec![T::zero(); cols + 1];
            let negate = rhs.is_neg();
            for j in 0..n {
                let c = if negate { -coeffs[j].clone() } else { coeffs[j].clone() };
                row[n + j] = -c.clone();
                row[j] = c;
            }
            if let Some(s) = slack_of_row[i] {
                row[s] = if negate { -T::one() } else { T::one() };
            }
            row[cols] = if negate { -rhs.clone() } else { rhs.clone() };
            if needs_art[i] {
                row[next_art] = T::one();
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(slack_of_row[i].expect("inequality rows carry a slack"));
            }
            a.push(row);
        }
        let mut t = Tableau { a, obj: vec![T::zero(); cols + 1], basis, cols };

        if n_art > 0 {
            // Phase 1: maximize -(sum of artificials).
            for j in art0..cols {
                t.obj[j] = T::one();
            }
            for i in 0..m {
                if t.basis[i] >= art0 {
                    t.eliminate_obj_with_row(i);
                }
            }
            if !t.run(cols) {
                unreachable!("phase one is bounded");
            }
            if t.obj[cols].is_neg() {
                return TableauResult::Infeasible;
            }
            t.drive_out_artificials(art0);
            t.drop_columns(art0);
        }

        // Phase 2.
        let cols = t.cols;
        t.obj = vec![T::zero(); cols + 1];
        for j in 0..n {
            t.obj[j] = -objective[j].clone();
            t.obj[n + j] = objective[j].clone();
        }
        for i in 0..t.a.len() {
            if !t.obj[t.basis[i]].is_zero() {
                t.eliminate_obj_with_row(i);
            }
        }
        if !t.run(cols) {
            return TableauResult::Unbounded;
        }
        let mut u = vec![T::zero(); cols];
        for (i, &b) in t.basis.iter().enumerate() {
            u[b] = t.a[i][cols].clone();
        }
        let x: Vec<T> = (0..n).map(|j| u[j].clone() - u[n + j].clone()).collect();
        let value = t.obj[cols].clone();
        TableauResult::Optimal(x, value)
    }

    fn eliminate_obj_with_row(&mut self, i: usize) {
        let f = self.obj[self.basis[i]].clone();
        if f.is_zero() {
            return;
        }
        let row = &self.a[i];
        for (j, rj) in row.iter().enumerate() {
            if !rj.is_zero() {
                self.obj[j] = self.obj[j].clone() - f.clone() * rj.clone();
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / self.a[r][c].clone();
        let width = self.a[r].len();
        for j in 0..width {
            if !self.a[r][j].is_zero() {
                self.a[r][j] = self.a[r][j].clone() * inv.clone();
            }
        }
        self.a[r][c] = T::one();
        let nz: Vec<usize> = (0..width).filter(|&j| !self.a[r][j].is_zero()).collect();
        let pivot_row = self.a[r].clone();
        for i in 0..self.a.len() {
            if i == r {
                continue;
            }
            let f = self.a[i][c].clone();
            if f.is_zero() {
                continue;
            }
            let row = &mut self.a[i];
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
            row[c] = T::zero();
        }
        let f = self.obj[c].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.obj[j] = self.obj[j].clone() - f.clone() * pivot_row[j].clone();
            }
            self.obj[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Bland's rule iterations over the first `active_cols` columns.
    /// Returns `false` when unbounded.
    fn run(&mut self, active_cols: usize) -> bool {
        let rhs = self.cols;
        loop {
            let Some(enter) = (0..active_cols).find(|&j| self.obj[j].is_neg()) else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                let aij = &self.a[i][enter];
                if !aij.is_pos() {
                    continue;
                }
                let ratio = self.a[i][rhs].clone() / aij.clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio.lt_tol(lr) || (ratio.eq_tol(lr) && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn drive_out_artificials(&mut self, art0: usize) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= art0 {
                if let Some(j) = (0..art0).find(|&j| !self.a[i][j].is_negligible()) {
                    self.pivot(i, j);
                    i += 1;
                } else {
                    // Redundant equality row.
                    self.a.remove(i);
                    self.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
    }

    fn drop_columns(&mut self, keep: usize) {
        let rhs = self.cols;
        for row in &mut self.a {
            let v = row[rhs].clone();
            row.truncate(keep);
            row.push(v);
        }
        self.cols = keep;
    }
}

//! Seeded random instances.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::PolyregError;
use crate::linalg::{Matrix, Vector};
use crate::polyhedra::HPolyhedron;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `R^n_+` with a random `A`.
    Orthant,
    /// A random box with a random `A`.
    Box,
    /// `k` random homogeneous inequalities, all strict at a random direction,
    /// so the cone has interior. Random `A`.
    RandomCone,
    /// `k` random inequalities around a known point, some tight there.
    RandomPolyhedron,
    /// `R^n_+` with a row diagonally dominant `A` (a P-matrix).
    PMatrix,
    /// A random polyhedron with `A = I + E`, `‖E‖ <= 1/2`.
    IdentityPerturbation,
    /// A random polyhedron with `A = -D`, `D` positive diagonal.
    NegatedDiagonal,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Orthant,
        Family::Box,
        Family::RandomCone,
        Family::RandomPolyhedron,
        Family::PMatrix,
        Family::IdentityPerturbation,
        Family::NegatedDiagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Orthant => "orthant",
            Family::Box => "box",
            Family::RandomCone => "random_cone",
            Family::RandomPolyhedron => "random_polyhedron",
            Family::PMatrix => "p_matrix",
            Family::IdentityPerturbation => "identity_perturbation",
            Family::NegatedDiagonal => "negated_diagonal",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = PolyregError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| PolyregError::Usage(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n: usize,
    /// Inequality count; ignored by the orthant-based families and `box`.
    pub k: usize,
    /// Cap on numerators and denominators.
    pub entry_bound: i64,
    pub family: Family,
}

impl GeneratorConfig {
    pub fn new(family: Family, n: usize, k: usize, seed: u64) -> Self {
        GeneratorConfig { seed, n, k, entry_bound: 3, family }
    }
}

struct Draw {
    rng: ChaCha8Rng,
    bound: i64,
}

impl Draw {
    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    fn rat<T: Scalar>(&mut self) -> T {
        let p = self.int(-self.bound, self.bound);
        let q = self.int(1, self.bound);
        T::from_ratio(p, q)
    }

    fn matrix<T: Scalar>(&mut self, n: usize) -> Matrix<T> {
        let data = (0..n * n).map(|_| self.rat()).collect();
        Matrix::new(n, n, data)
    }

    fn nonzero_row<T: Scalar>(&mut self, n: usize) -> Vector<T> {
        loop {
            let row: Vec<i64> = (0..n).map(|_| self.int(-self.bound, self.bound)).collect();
            if row.iter().any(|&e| e != 0) {
                return Vector::from_ints(&row);
            }
        }
    }

    fn polyhedron<T: Scalar>(&mut self, n: usize, k: usize) -> HPolyhedron<T> {
        let center: Vector<T> = (0..n).map(|_| self.rat()).collect();
        let rows = (0..k)
            .map(|_| {
                let y = self.nonzero_row(n);
                let slack = if self.int(0, 2) == 0 { 0 } else { self.int(1, self.bound) };
                let alpha = y.dot(&center) + T::from_ratio(slack, 1);
                (y, alpha)
            })
            .collect();
        HPolyhedron::new(n, rows).expect("rows have length n")
    }
}

/// `(A, C)` with `C` nonempty by construction.
pub fn generate<T: Scalar>(cfg: &GeneratorConfig) -> (Matrix<T>, HPolyhedron<T>) {
    let n = cfg.n;
    let mut d = Draw { rng: ChaCha8Rng::seed_from_u64(cfg.seed), bound: cfg.entry_bound.max(1) };
    match cfg.family {
        Family::Orthant => (d.matrix(n), HPolyhedron::orthant(n)),
        Family::Box => {
            let lo: Vec<T> = (0..n).map(|_| T::from_ratio(-d.int(0, d.bound), 1)).collect();
            let hi: Vec<T> = lo.iter().map(|l| l.clone() + T::from_ratio(d.int(1, d.bound), 1)).collect();
            (d.matrix(n), HPolyhedron::boxed(&lo, &hi))
        }
        Family::RandomCone => {
            let inside: Vector<T> = d.nonzero_row(n);
            let rows = (0..cfg.k)
                .map(|_| loop {
                    let y: Vector<T> = d.nonzero_row(n);
                    match y.dot(&inside).sign() {
                        Ordering::Less => break y,
                        Ordering::Greater => break y.scale(&-T::one()),
                        Ordering::Equal => continue,
                    }
                })
                .collect();
            (d.matrix(n), HPolyhedron::cone(n, rows).expect("rows have length n"))
        }
        Family::RandomPolyhedron => {
            let c = d.polyhedron(n, cfg.k);
            (d.matrix(n), c)
        }
        Family::PMatrix => {
            let mut a: Matrix<T> = d.matrix(n);
            for i in 0..n {
                let off = (0..n).filter(|&j| j != i).fold(T::zero(), |s, j| s + a.get(i, j).abs());
                a.set(i, i, off + T::from_ratio(d.int(1, d.bound), d.int(1, d.bound)));
            }
            (a, HPolyhedron::orthant(n))
        }
        Family::IdentityPerturbation => {
            let c = d.polyhedron(n, cfg.k);
            let scale = T::from_ratio(1, 2 * n.max(1) as i64 * d.bound);
            let mut a = Matrix::<T>::identity(n);
            for i in 0..n {
                for j in 0..n {
                    let e = T::from_ratio(d.int(-d.bound, d.bound), 1) * scale.clone();
                    a.set(i, j, a.get(i, j).clone() + e);
                }
            }
            (a, c)
        }
        Family::NegatedDiagonal => {
            let c = d.polyhedron(n, cfg.k);
            let mut a = Matrix::zeros(n, n);
            for i in 0..n {
                a.set(i, i, T::from_ratio(-d.int(1, d.bound), 1));
            }
            (a, c)
        }
    }
}

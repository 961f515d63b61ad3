//! Surjection modulus of a complementarity map.
//!
//! For nested faces `F1 ⊆ F2` put `D = F2 - F1` and
//! `W = (S (Λ(F1) - Λ(F2)))°`. The modulus is
//!
//! ```text
//! r = min over pairs of  inf { ‖Π_D(Tᵀ z)‖ : z ∈ W, ‖z‖ = 1 }
//! ```
//!
//! Positivity (`r > 0`) is decided exactly: `r = 0` iff some nonzero `z ∈ W`
//! has `⟨z, T g⟩ <= 0` for every generator `g` of `D`. The value itself is
//! estimated in `f64` by sampling `W` and refining with projected descent.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::complementarity::ComplementarityMap;
use crate::linalg::{Matrix, Vector};
use crate::polyhedra::{nonzero_in_cone, HPolyhedron, PolyCone};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusConfig {
    /// Random directions drawn per face pair.
    pub budget: usize,
    pub seed: u64,
    /// Projected-descent iterations from each of the best samples.
    pub descent_steps: usize,
}

impl Default for ModulusConfig {
    fn default() -> Self {
        ModulusConfig { budget: 20_000, seed: 0, descent_steps: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ModulusReport<T> {
    /// Exact: `r > 0`.
    pub positive: bool,
    #[serde(serialize_with = "ser_bound")]
    pub lower: f64,
    #[serde(serialize_with = "ser_bound")]
    pub upper: f64,
    /// Face pair `(I(F1), I(F2))` attaining the estimate.
    pub argmin: Option<(Vec<usize>, Vec<usize>)>,
    /// When `r = 0`: the pair and a nonzero `z ∈ W` with `Tᵀ z ∈ D°`.
    pub witness: Option<(Vec<usize>, Vec<usize>, Vector<T>)>,
    pub pairs_checked: usize,
}

fn ser_bound<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

/// `cone(F2 - F1)` for faces of a polyhedron: rows of `F2` become equalities,
/// rows tight only on `F1` stay inequalities.
pub fn face_difference<T: Scalar>(c: &HPolyhedron<T>, f1_active: &[usize], f2_active: &[usize]) -> PolyCone<T> {
    let mut rows = Vec::new();
    for &i in f1_active {
        rows.push(c.row(i).clone());
        if f2_active.binary_search(&i).is_ok() {
            rows.push(c.row(i).neg());
        }
    }
    PolyCone::from_h(c.dim(), rows)
}

struct PairData {
    d_gens: Vec<DVector<f64>>,
    w_rows: Vec<DVector<f64>>,
    w_rays: Vec<DVector<f64>>,
    w_lin: Vec<DVector<f64>>,
}

enum PairOutcome<T> {
    Zero(Vector<T>),
    Empty,
    Estimate { best: f64, improvement: f64 },
}

fn to_dvec<T: Scalar>(v: &Vector<T>) -> DVector<f64> {
    DVector::from_vec(v.to_f64())
}

fn to_dmat<T: Scalar>(m: &Matrix<T>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_f64_lossy())
}

pub fn surjection_modulus<T: Scalar>(map: &ComplementarityMap<T>, cfg: &ModulusConfig) -> ModulusReport<T> {
    let rel = &map.relation;
    let lat = &rel.lattice;
    let n = map.dim();
    let pairs = lat.nested_pairs();
    let t = to_dmat(&map.t);
    let key = |i: usize| lat.faces[i].active_set.clone();

    let outcomes: Vec<PairOutcome<T>> = pairs
        .par_iter()
        .enumerate()
        .map(|(idx, &(i1, i2))| {
            let d = face_difference(&rel.base, &lat.faces[i1].active_set, &lat.faces[i2].active_set);
            let lam = rel.assignment[i1].minus(&rel.assignment[i2]);
            let w_rows: Vec<Vector<T>> = lam.generators().all_directions().iter().map(|h| map.s.mul_vec(h)).collect();
            let d_dirs = d.generators().all_directions();
            let mut rows = w_rows.clone();
            rows.extend(d_dirs.iter().map(|g| map.t.mul_vec(g)));
            if let Some(z) = nonzero_in_cone(&rows, n) {
                return PairOutcome::Zero(z);
            }
            let w = PolyCone::from_h(n, w_rows.clone());
            let wg = w.generators();
            if wg.rays.is_empty() && wg.lineality.is_empty() {
                return PairOutcome::Empty;
            }
            let data = PairData {
                d_gens: d_dirs.iter().map(to_dvec).collect(),
                w_rows: w_rows.iter().map(to_dvec).collect(),
                w_rays: wg.rays.iter().map(to_dvec).collect(),
                w_lin: wg.lineality.iter().map(to_dvec).collect(),
            };
            let seed = cfg.seed ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let (best, improvement) = estimate_pair(&data, &t, cfg, seed);
            PairOutcome::Estimate { best, improvement }
        })
        .collect();

    let mut report = ModulusReport {
        positive: true,
        lower: f64::INFINITY,
        upper: f64::INFINITY,
        argmin: None,
        witness: None,
        pairs_checked: pairs.len(),
    };
    let mut improvement = 0.0f64;
    for (&(i1, i2), out) in pairs.iter().zip(outcomes) {
        match out {
            PairOutcome::Zero(z) => {
                if report.positive {
                    report.positive = false;
                    report.witness = Some((key(i1), key(i2), z));
                    report.argmin = Some((key(i1), key(i2)));
                }
            }
            PairOutcome::Empty => {}
            PairOutcome::Estimate { best, improvement: imp } => {
                if report.positive && best < report.upper {
                    report.upper = best;
                    improvement = imp;
                    report.argmin = Some((key(i1), key(i2)));
                }
            }
        }
    }
    if !report.positive {
        report.lower = 0.0;
        report.upper = 0.0;
    } else if report.upper.is_finite() {
        let best = report.upper;
        let guard = 1e-9 * best.max(1.0);
        let tol = improvement.max(1e-9);
        report.lower = (best - tol.max(guard)).max(0.0);
        report.upper = best + guard;
    }
    report
}

fn estimate_pair(data: &PairData, t: &DMatrix<f64>, cfg: &ModulusConfig, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objective = |z: &DVector<f64>| project_cone(&data.d_gens, &(t.transpose() * z)).norm();

    let mut candidates: Vec<DVector<f64>> = Vec::new();
    candidates.extend(data.w_rays.iter().cloned());
    for l in &data.w_lin {
        candidates.push(l.clone());
        candidates.push(-l.clone());
    }
    for _ in 0..cfg.budget {
        let mut z = DVector::zeros(t.nrows());
        for r in &data.w_rays {
            let u: f64 = rng.gen();
            z += r * (u * u * u);
        }
        for l in &data.w_lin {
            z += l * rng.gen_range(-1.0..1.0);
        }
        candidates.push(z);
    }
    let mut scored: Vec<(f64, DVector<f64>)> = candidates
        .into_iter()
        .filter_map(|z| {
            let norm = z.norm();
            (norm > 1e-12).then(|| {
                let z = z / norm;
                (objective(&z), z)
            })
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let sampled = scored[0].0;
    let mut best = sampled;
    for (start_val, start) in scored.into_iter().take(4) {
        let (val, _) = descend(data, t, start, start_val, cfg.descent_steps, &objective);
        best = best.min(val);
    }
    (best, sampled - best)
}

fn descend(
    data: &PairData,
    t: &DMatrix<f64>,
    mut z: DVector<f64>,
    mut val: f64,
    steps: usize,
    objective: &dyn Fn(&DVector<f64>) -> f64,
) -> (f64, DVector<f64>) {
    let mut eta = 0.1;
    for _ in 0..steps {
        let grad = t * project_cone(&data.d_gens, &(t.transpose() * &z)) * 2.0;
        let moved = &z - &grad * eta;
        let proj = &moved - project_cone(&data.w_rows, &moved);
        let norm = proj.norm();
        if norm > 1e-12 {
            let cand = proj / norm;
            let cval = objective(&cand);
            if cval < val {
                z = cand;
                val = cval;
                eta *= 1.5;
                continue;
            }
        }
        eta *= 0.5;
        if eta < 1e-12 {
            break;
        }
    }
    (val, z)
}

/// Euclidean projection of `y` onto `cone(gens)`.
pub fn project_cone(gens: &[DVector<f64>], y: &DVector<f64>) -> DVector<f64> {
    if gens.is_empty() {
        return DVector::zeros(y.len());
    }
    let e = DMatrix::from_columns(gens);
    &e * nnls(&e, y)
}

/// Lawson–Hanson active-set method for `min ‖E x - y‖` with `x >= 0`.
pub fn nnls(e: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    let m = e.ncols();
    let tol = 1e-12 * (1.0 + y.norm()) * (1.0 + e.norm());
    let mut x = DVector::<f64>::zeros(m);
    let mut passive = vec![false; m];
    for _ in 0..(3 * m + 10) {
        let w = e.transpose() * (y - e * &x);
        let next = (0..m).filter(|&j| !passive[j] && w[j] > tol).max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(j) = next else { break };
        passive[j] = true;
        for _ in 0..(3 * m + 10) {
            let s = passive_solve(e, y, &passive);
            if (0..m).all(|i| !passive[i] || s[i] > tol) {
                x = s;
                break;
            }
            let mut alpha = 1.0f64;
            for i in 0..m {
                if passive[i] && s[i] <= tol {
                    let denom = x[i] - s[i];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    }
                }
            }
            x += (&s - &x) * alpha;
            for i in 0..m {
                if passive[i] && x[i] <= tol {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    x
}

fn passive_solve(e: &DMatrix<f64>, y: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let idx: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let mut out = DVector::zeros(passive.len());
    if idx.is_empty() {
        return out;
    }
    let sub = e.select_columns(&idx);
    let sol = sub.svd(true, true).solve(y, 1e-12).expect("both factors computed");
    for (k, &i) in idx.iter().enumerate() {
        out[i] = sol[k];
    }
    out
}

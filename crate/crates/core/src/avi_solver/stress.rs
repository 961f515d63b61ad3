use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AviInstance;
use crate::linalg::{orthogonal_complement, Vector};
use crate::scalar::Scalar;

/// How many right-hand sides to synthesize and how to draw the random ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StressConfig {
    /// Minimum number of samples; random points top up the targeted ones.
    pub min_samples: usize,
    pub seed: u64,
    /// Random entries are `p/q` with `|p| <= 3 * bound`, `1 <= q <= bound`.
    pub bound: i64,
}

impl Default for StressConfig {
    fn default() -> Self {
        StressConfig { min_samples: 100, seed: 0, bound: 4 }
    }
}

fn scaled_to_unit_max<T: Scalar>(v: &Vector<T>) -> Option<Vector<T>> {
    let m = v.iter().map(|e| e.abs()).fold(T::zero(), |a, b| if b > a { b } else { a });
    if m.is_negligible() {
        None
    } else {
        Some(v.scale(&(T::one() / m)))
    }
}

/// Right-hand sides where solution pieces meet, then random ones.
///
/// For each face `F` with relative-interior points `x̄ ∈ ri F` and
/// `ȳ ∈ ri N(C, F)`, `A x̄ + ȳ` lies inside the piece of `F`. For each covering
/// pair `F ⊂ F'`, `A x̄_F + ȳ_F'` lies on the common boundary of the pieces of
/// `F` and `F'`; it is pushed to both sides along several directions.
pub fn stress_samples<T: Scalar>(inst: &AviInstance<T>, cfg: &StressConfig) -> Vec<Vector<T>> {
    let n = inst.dim();
    let lat = &inst.lattice;
    let ybar: Vec<Vector<T>> = lat
        .faces
        .iter()
        .map(|f| Vector::sum(&f.active_set.iter().map(|&i| inst.c.row(i).clone()).collect::<Vec<_>>(), n))
        .collect();
    let ax: Vec<Vector<T>> = lat.faces.iter().map(|f| inst.a.mul_vec(&f.ri_point)).collect();

    let mut out: Vec<Vector<T>> = Vec::new();
    let push = |z: Vector<T>, out: &mut Vec<Vector<T>>| {
        if !out.contains(&z) {
            out.push(z);
        }
    };
    for i in 0..lat.len() {
        push(ax[i].add(&ybar[i]), &mut out);
    }
    let epsilons = [T::from_ratio(1, 64), T::from_ratio(1, 4096)];
    for &(i, j) in &lat.covering_pairs {
        let zb = ax[i].add(&ybar[j]);
        push(zb.clone(), &mut out);
        let mut dirs = Vec::new();
        dirs.push(inst.a.mul_vec(&lat.faces[j].ri_point.sub(&lat.faces[i].ri_point)));
        dirs.push(ybar[i].sub(&ybar[j]));
        let mut span: Vec<Vector<T>> = lat.faces[i].span_basis.iter().map(|b| inst.a.mul_vec(b)).collect();
        span.extend(lat.faces[j].active_set.iter().map(|&r| inst.c.row(r).clone()));
        let normal = orthogonal_complement(&span, n);
        if normal.len() == 1 {
            dirs.push(normal[0].clone());
        }
        for d in dirs.iter().filter_map(scaled_to_unit_max) {
            for eps in &epsilons {
                push(zb.axpy(eps, &d), &mut out);
                push(zb.axpy(&-eps.clone(), &d), &mut out);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bound = cfg.bound.max(1);
    let mut misses = 0;
    while out.len() < cfg.min_samples && n > 0 {
        let z: Vector<T> = (0..n)
            .map(|_| T::from_ratio(rng.gen_range(-3 * bound..=3 * bound), rng.gen_range(1..=bound)))
            .collect();
        let before = out.len();
        push(z, &mut out);
        if out.len() == before {
            misses += 1;
            if misses % 16 == 0 {
                bound *= 2;
            }
        }
    }
    out
}

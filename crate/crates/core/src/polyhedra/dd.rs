//! Double description conversion between the inequality form of a
//! homogeneous cone and its generator form.

use crate::linalg::Vector;
use crate::scalar::Scalar;

/// Generator form of a cone: `cone(rays) + span(lineality)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generators<T> {
    pub rays: Vec<Vector<T>>,
    pub lineality: Vec<Vector<T>>,
}

impl<T: Scalar> Generators<T> {
    pub fn empty() -> Self {
        Generators { rays: Vec::new(), lineality: Vec::new() }
    }

    /// Rays followed by both signs of every lineality vector.
    pub fn all_directions(&self) -> Vec<Vector<T>> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(l.neg());
        }
        out
    }

    /// Rays and lineality vectors together; spans the linear hull.
    pub fn spanning(&self) -> Vec<Vector<T>> {
        let mut out = self.rays.clone();
        out.extend(self.lineality.iter().cloned());
        out
    }
}

/// Minimal generators of `{x ∈ R^n : ⟨a, x⟩ <= 0, a ∈ rows}`.
///
/// Incremental method: lineality vectors are kept orthogonal to every
/// processed row, rays are combined pairwise only when adjacent, which is
/// decided combinatorially from their zero sets.
pub fn h_to_v<T: Scalar>(n: usize, rows: &[Vector<T>]) -> Generators<T> {
    let mut lineality: Vec<Vector<T>> = (0..n).map(|i| Vector::unit(n, i)).collect();
    let mut rays: Vec<Vector<T>> = Vec::new();
    let mut processed: Vec<&Vector<T>> = Vec::new();

    for a in rows {
        if a.is_zero() {
            continue;
        }
        if let Some(p) = lineality.iter().position(|l| !a.dot(l).is_negligible()) {
            let mut l = lineality.remove(p);
            let mut al = a.dot(&l);
            if al.is_pos() {
                l = l.neg();
                al = -al;
            }
            for m in lineality.iter_mut() {
                let am = a.dot(m);
                if !am.is_negligible() {
                    *m = m.axpy(&(-(am / al.clone())), &l);
                }
            }
            for r in rays.iter_mut() {
                let ar = a.dot(r);
                if !ar.is_negligible() {
                    *r = r.axpy(&(-(ar / al.clone())), &l).normalized_direction();
                }
            }
            rays.push(l.normalized_direction());
            processed.push(a);
            continue;
        }

        let vals: Vec<T> = rays.iter().map(|r| a.dot(r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_pos()).collect();
        if pos.is_empty() {
            processed.push(a);
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_neg()).collect();
        let zero_sets: Vec<Vec<bool>> =
            rays.iter().map(|r| processed.iter().map(|c| c.dot(r).is_negligible()).collect()).collect();

        let mut next: Vec<Vector<T>> =
            (0..rays.len()).filter(|&i| !vals[i].is_pos()).map(|i| rays[i].clone()).collect();
        for &p in &pos {
            for &q in &neg {
                if adjacent(&zero_sets, p, q) {
                    let w = rays[q].scale(&vals[p]).sub(&rays[p].scale(&vals[q]));
                    next.push(w.normalized_direction());
                }
            }
        }
        rays = next;
        processed.push(a);
    }
    Generators { rays, lineality }
}

fn adjacent(zero_sets: &[Vec<bool>], p: usize, q: usize) -> bool {
    let common: Vec<usize> = (0..zero_sets[p].len()).filter(|&c| zero_sets[p][c] && zero_sets[q][c]).collect();
    !zero_sets
        .iter()
        .enumerate()
        .any(|(r, z)| r != p && r != q && common.iter().all(|&c| z[c]))
}

/// Inequality rows of `cone(rays) + span(lineality)`, via the generators of
/// its polar.
pub fn v_to_h<T: Scalar>(n: usize, gens: &Generators<T>) -> Vec<Vector<T>> {
    let polar = h_to_v(n, &gens.all_directions());
    polar.all_directions()
}

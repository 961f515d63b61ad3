use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::vector::Vector;
use crate::error::{PolyregError, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn scalar(n: usize, c: T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&e| T::from_ratio(e, 1)).collect())
    }

    /// Stacks the given vectors as rows. `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vector<T>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row has wrong length");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    /// Places the given vectors as columns of an `n`-row matrix.
    pub fn from_columns(columns: &[Vector<T>], n: usize) -> Self {
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), n, "column has wrong length");
            for i in 0..n {
                m.set(i, j, c[i].clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector<T> {
        Vector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vector<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vector<T>) -> Vector<T> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc + a.clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    /// Square submatrix on the given (sorted) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn pick_pivot(&self, col: usize, from: usize) -> Option<usize> {
        if T::EXACT {
            (from..self.rows).find(|&i| !self.get(i, col).is_zero())
        } else {
            let mut best: Option<(usize, T)> = None;
            for i in from..self.rows {
                let a = self.get(i, col).abs();
                if a.is_negligible() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| a > *b) {
                    best = Some((i, a));
                }
            }
            best.map(|(i, _)| i)
        }
    }

    /// Gauss-Jordan elimination restricted to the first `limit` columns.
    fn echelon_upto(&self, limit: usize) -> Echelon<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(c, r) else { continue };
            m.swap_rows(r, p);
            let inv = T::one() / m.get(r, c).clone();
            for j in 0..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let rj = m.get(r, j);
                    if rj.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).clone() - f.clone() * rj.clone();
                    m.set(i, j, v);
                }
                if !T::EXACT {
                    m.set(i, c, T::zero());
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn echelon(&self) -> Echelon<T> {
        self.echelon_upto(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(PolyregError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = m.pick_pivot(c, c) else { return Ok(T::zero()) };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = det * piv.clone();
            for i in c + 1..n {
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                let ratio = f / piv.clone();
                for j in c..n {
                    let v = m.get(i, j).clone() - ratio.clone() * m.get(c, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Basis of `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vector<T>> {
        let e = self.echelon();
        kernel_from_echelon(&e, self.cols)
    }

    /// The pivot columns of the matrix, a basis of its column space.
    pub fn column_space_basis(&self) -> Vec<Vector<T>> {
        self.echelon().pivots.iter().map(|&j| self.column(j)).collect()
    }

    /// Nonzero rows of the reduced echelon form, a basis of the row space.
    pub fn row_space_basis(&self) -> Vec<Vector<T>> {
        let e = self.echelon();
        (0..e.pivots.len()).map(|i| e.reduced.row(i)).collect()
    }

    /// Indices of a maximal linearly independent subset of rows, greedily in order.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        let mut basis: Vec<Vector<T>> = Vec::new();
        for i in 0..self.rows {
            let mut cand = basis.clone();
            cand.push(self.row(i));
            if Matrix::from_rows(&cand, self.cols).rank() == cand.len() {
                basis = cand;
                chosen.push(i);
            }
        }
        chosen
    }

    /// Solves `M x = b`, returning a particular solution and a kernel basis,
    /// or `None` when the system is inconsistent.
    pub fn solve_linear(&self, b: &Vector<T>) -> Result<Option<(Vector<T>, Vec<Vector<T>>)>> {
        if b.len() != self.rows {
            return Err(PolyregError::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let e = aug.echelon_upto(self.cols);
        // Inconsistent iff some zero row of the coefficient part has a nonzero rhs.
        for i in e.pivots.len()..self.rows {
            if !e.reduced.get(i, self.cols).is_negligible() {
                return Ok(None);
            }
        }
        let mut x = Vector::zeros(self.cols);
        for (r, &c) in e.pivots.iter().enumerate() {
            x[c] = e.reduced.get(r, self.cols).clone();
        }
        let kernel = kernel_from_echelon(&e, self.cols);
        Ok(Some((x, kernel)))
    }

    pub fn inverse(&self) -> Result<Option<Self>> {
        if !self.is_square() {
            return Err(PolyregError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, T::one());
        }
        let e = aug.echelon_upto(n);
        if e.pivots.len() < n {
            return Ok(None);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, e.reduced.get(i, n + j).clone());
            }
        }
        Ok(Some(inv))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_f64()).collect()
    }
}

fn kernel_from_echelon<T: Scalar>(e: &Echelon<T>, cols: usize) -> Vec<Vector<T>> {
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..cols).filter(|&j| !is_pivot[j]) {
        let mut v = Vector::zeros(cols);
        v[f] = T::one();
        for (r, &p) in e.pivots.iter().enumerate() {
            v[p] = -e.reduced.get(r, f).clone();
        }
        basis.push(v);
    }
    basis
}

/// Rank of a family of vectors in `R^n`.
pub fn rank_of<T: Scalar>(vectors: &[Vector<T>], n: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors, n).rank()
}

/// A basis of the span of a family of vectors (a subfamily).
pub fn span_basis<T: Scalar>(vectors: &[Vector<T>], n: usize) -> Vec<Vector<T>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    Matrix::from_columns(vectors, n).column_space_basis()
}

/// Basis of the orthogonal complement of the span of `vectors`.
pub fn orthogonal_complement<T: Scalar>(vectors: &[Vector<T>], n: usize) -> Vec<Vector<T>> {
    if vectors.is_empty() {
        return (0..n).map(|i| Vector::unit(n, i)).collect();
    }
    Matrix::from_rows(vectors, n).kernel_basis()
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl<T: Scalar> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&self.row(i))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(p: i64) -> Q {
        Q::from_ratio(p, 1)
    }

    #[test]
    fn solve_identity() {
        let m = Matrix::<Q>::identity(2);
        let (x, k) = m.solve_linear(&Vector::from_ints(&[1, 2])).unwrap().unwrap();
        assert_eq!(x, Vector::from_ints(&[1, 2]));
        assert!(k.is_empty());
    }

    #[test]
    fn solve_single_homogeneous_equation() {
        let m = Matrix::<Q>::from_ints(1, 2, &[1, 1]);
        let (x, k) = m.solve_linear(&Vector::from_ints(&[0])).unwrap().unwrap();
        assert_eq!(x, Vector::from_ints(&[0, 0]));
        assert_eq!(k, vec![Vector::from_ints(&[-1, 1])]);
    }

    #[test]
    fn solve_inconsistent() {
        let m = Matrix::<Q>::from_ints(2, 2, &[1, 0, 1, 0]);
        assert!(m.solve_linear(&Vector::from_ints(&[1, 2])).unwrap().is_none());
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = Matrix::<Q>::identity(2);
        assert!(matches!(
            m.solve_linear(&Vector::from_ints(&[1])),
            Err(PolyregError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_and_kernel_of_zero() {
        let m = Matrix::<Q>::zeros(3, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().len(), 3);
    }

    #[test]
    fn determinants() {
        assert_eq!(Matrix::<Q>::from_ints(2, 2, &[2, 0, 0, 3]).det().unwrap(), q(6));
        assert_eq!(Matrix::<Q>::from_ints(2, 2, &[0, 1, 1, 0]).det().unwrap(), q(-1));
        assert!(matches!(Matrix::<Q>::zeros(2, 3).det(), Err(PolyregError::NotSquare { .. })));
        assert_eq!(Matrix::<Q>::zeros(0, 0).det().unwrap(), q(1));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::<Q>::from_ints(3, 3, &[2, 1, 0, 0, 1, 4, 1, 0, 1]);
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert!(Matrix::<Q>::from_ints(2, 2, &[1, 2, 2, 4]).inverse().unwrap().is_none());
    }

    #[test]
    fn column_space_of_rank_one() {
        let m = Matrix::<Q>::from_ints(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.column_space_basis(), vec![Vector::from_ints(&[1, 2])]);
        assert_eq!(m.row_space_basis().len(), 1);
        assert_eq!(m.independent_rows(), vec![0]);
    }

    #[test]
    fn float_instance() {
        let m = Matrix::<f64>::from_ints(2, 2, &[2, 1, 1, 3]);
        assert!((m.det().unwrap() - 5.0).abs() < 1e-12);
        let (x, _) = m.solve_linear(&Vector::new(vec![3.0, 5.0])).unwrap().unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
    }
}

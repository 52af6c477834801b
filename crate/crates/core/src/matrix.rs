use std::fmt;

use crate::ring::{ExactDivRing, Ring};
use crate::scalar::Scalar;

/// Dense row-major matrix over a [`Ring`].
#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, R::one())
    }

    pub fn scalar(n: usize, value: R) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = value.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: R) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[R] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        Self::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(R::zero(), |acc, t| acc.add(&self.get(r, t).mul(other.get(t, c))))
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, s: &R) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    /// Returns `Some(lambda)` when the matrix equals `lambda * I`.
    pub fn as_scalar(&self) -> Option<R> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let lambda = self.get(0, 0).clone();
        let ok = (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let x = self.get(r, c);
                if r == c {
                    *x == lambda
                } else {
                    x.is_zero()
                }
            })
        });
        ok.then_some(lambda)
    }
}

impl<R: ExactDivRing> Matrix<R> {
    /// Fraction-free (Bareiss) determinant. Every division is exact, so the
    /// routine stays inside polynomial rings.
    pub fn determinant(&self) -> R {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return R::one();
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return R::zero();
                };
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                negate = !negate;
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(i, j).mul(&pivot).sub(&a.get(i, k).mul(a.get(k, j)));
                    let v = num.exact_div(&prev).expect("Bareiss division is exact");
                    a.set(i, j, v);
                }
                a.set(i, k, R::zero());
            }
            prev = pivot;
        }
        let det = a.get(n - 1, n - 1).clone();
        if negate {
            det.neg()
        } else {
            det
        }
    }
}

impl<T: Scalar> Matrix<T> {
    /// Largest absolute entry, converted to `f64`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| crate::scalar::to_f64(&x.abs())).fold(0.0, f64::max)
    }

    /// Determinant by Gaussian elimination over the field `T`.
    pub fn field_determinant(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for k in 0..n {
            // Largest pivot: harmless for exact fields and stabilizes floats.
            let p = (k..n)
                .max_by(|&x, &y| {
                    a.get(x, k).abs().partial_cmp(&a.get(y, k).abs()).unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if Ring::is_zero(a.get(p, k)) {
                return T::zero();
            }
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            det = det * pivot.clone();
            for i in k + 1..n {
                let f = a.get(i, k).clone() / pivot.clone();
                if Ring::is_zero(&f) {
                    continue;
                }
                for j in k..n {
                    let v = a.get(i, j).clone() - f.clone() * a.get(k, j).clone();
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Solves `self * x = b` by partial pivoting; `None` when singular.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&u, &v| {
                    a.get(u, k).abs().partial_cmp(&a.get(v, k).abs()).unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if Ring::is_zero(a.get(p, k)) {
                return None;
            }
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                x.swap(k, p);
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                let f = a.get(i, k).clone() / pivot.clone();
                for j in k..n {
                    let v = a.get(i, j).clone() - f.clone() * a.get(k, j).clone();
                    a.set(i, j, v);
                }
                x[i] = x[i].clone() - f * x[k].clone();
            }
        }
        for k in (0..n).rev() {
            let v = (k + 1..n).fold(x[k].clone(), |v, j| v - a.get(k, j).clone() * x[j].clone());
            x[k] = v / a.get(k, k).clone();
        }
        Some(x)
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for r in 0..self.rows {
            list.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        list.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect())
    }

    #[test]
    fn bareiss_matches_field_elimination() {
        let a = m(&[&[0, 2, 1], &[3, -1, 4], &[5, 0, -2]]);
        assert_eq!(a.determinant(), a.field_determinant());
        assert_eq!(a.determinant(), rat(57));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.determinant(), rat(0));
        assert_eq!(Matrix::<Rational>::identity(4).determinant(), rat(1));
    }

    #[test]
    fn scalar_detection() {
        assert_eq!(Matrix::scalar(3, rat(-1)).as_scalar(), Some(rat(-1)));
        assert_eq!(m(&[&[1, 1], &[0, 1]]).as_scalar(), None);
    }

    #[test]
    fn solve_recovers_solution() {
        let a = m(&[&[0, 2, 1], &[3, -1, 4], &[5, 0, -2]]);
        let x = vec![rat(1), rat(-2), rat(3)];
        let b: Vec<Rational> = (0..3)
            .map(|r| (0..3).fold(rat(0), |acc, c| acc + a.get(r, c).clone() * x[c].clone()))
            .collect();
        assert_eq!(a.solve(&b), Some(x));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).solve(&[rat(1), rat(1)]), None);
    }
}

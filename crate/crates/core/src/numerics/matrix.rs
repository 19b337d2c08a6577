use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{pairwise_product, vandermonde};
use crate::error::{invalid, Result};

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return invalid(format!("{} entries for a {}x{} matrix", data.len(), rows, cols));
        }
        Ok(Self { rows, cols, data })
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix product. Panics on a shape mismatch.
    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// `I − self` for a square matrix.
    pub fn identity_minus(&self) -> ComplexMatrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = -*x;
        }
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += 1.0;
        }
        m
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.norm()))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant by LU factorization with partial pivoting.
pub fn det_complex(m: &ComplexMatrix) -> Result<Complex64> {
    if !m.is_square() {
        return invalid(format!("determinant of a {}x{} matrix", m.rows, m.cols));
    }
    let n = m.rows;
    let mut a = m.data.clone();
    let mut diag = Vec::with_capacity(n);
    let mut sign = 1.0;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm();
        for i in k + 1..n {
            let v = a[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        diag.push(pivot);
        let inv = 1.0 / pivot;
        for i in k + 1..n {
            let factor = a[i * n + k] * inv;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = a[k * n + j];
                a[i * n + j] -= factor * u;
            }
        }
    }
    Ok(pairwise_product(&diag) * sign)
}

/// Closed-form Cauchy determinant
/// `det[1/(x_i − y_j)] = Π_{i<j}(x_i − x_j)(y_j − y_i) / Π_{i,j}(x_i − y_j)`.
pub fn cauchy_det(x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    if x.len() != y.len() {
        return invalid("Cauchy determinant needs equally many x and y");
    }
    let n = x.len();
    for i in 0..n {
        for j in 0..n {
            if (i < j && (x[i] == x[j] || y[i] == y[j])) || x[i] == y[j] {
                return invalid("coincident points in Cauchy determinant");
            }
        }
    }
    // Π_{i<j}(x_i − x_j) = (−1)^{n(n−1)/2} Π_{i<j}(x_j − x_i)
    let flips = if (n * n.saturating_sub(1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
    let num = vandermonde(x) * vandermonde(y) * flips;
    Ok(num / super::cross_product(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_and_identity() {
        assert_eq!(det_complex(&ComplexMatrix::zeros(0, 0)).unwrap(), c(1.0, 0.0));
        assert_eq!(det_complex(&ComplexMatrix::identity(3)).unwrap(), c(1.0, 0.0));
        assert!(det_complex(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn small_cauchy() {
        assert_eq!(cauchy_det(&[c(1.0, 0.0)], &[c(0.0, 0.0)]).unwrap(), c(1.0, 0.0));
        let v = cauchy_det(&[c(2.0, 0.0), c(3.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - c(-1.0 / 12.0, 0.0)).norm() < 1e-15);
        assert!(cauchy_det(&[c(1.0, 0.0)], &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn two_by_two() {
        let m = ComplexMatrix::from_rows(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0), c(4.0, -1.0)]).unwrap();
        let expect = c(1.0, 1.0) * c(4.0, -1.0) - c(2.0, 0.0) * c(0.0, 3.0);
        assert!((det_complex(&m).unwrap() - expect).norm() < 1e-14);
    }
}

//! Small dense real matrices.
//!
//! Storage is column-major so that the flat value array of a `p × q` matrix is
//! exactly `vec` of it, and so that an order-2 [`DenseTensor`](crate::DenseTensor)
//! shares the same layout.

use std::fmt;

use crate::error::{Error, Result};

/// Pivot threshold below which a matrix is treated as singular when inverting.
pub const INVERSE_PIVOT_TOL: f64 = 1e-10;
/// Pivot threshold below which the determinant is reported as exactly zero.
pub const DET_PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Wraps column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from row slices; rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        if rows.iter().any(|row| row.as_ref().len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        Ok(Self::from_fn(r, c, |i, j| rows[i].as_ref()[j]))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn column(v: &[f64]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + j * self.rows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + j * self.rows] = v;
    }

    /// Column-major values.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == 0.0 {
                    continue;
                }
                for i in 0..self.rows {
                    out.data[i + j * self.rows] += self.get(i, k) * b;
                }
            }
        }
        Ok(out)
    }

    /// Panics on non-conformable shapes; use [`Matrix::try_matmul`] for checked use.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        self.try_matmul(other).expect("matmul shape mismatch")
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::dim(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut y = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += self.get(i, j) * xj;
            }
        }
        Ok(y)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest entrywise absolute difference; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// True when the matrix has exactly one `1` per row and column and zeros elsewhere.
    pub fn is_permutation_matrix(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        if self.data.iter().any(|&v| v != 0.0 && v != 1.0) {
            return false;
        }
        let rows_ok =
            (0..self.rows).all(|i| (0..self.cols).filter(|&j| self.get(i, j) == 1.0).count() == 1);
        let cols_ok =
            (0..self.cols).all(|j| self.col(j).iter().filter(|&&v| v == 1.0).count() == 1);
        rows_ok && cols_ok
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::dim(format!(
                "LU of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0usize;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a.get(x, k).abs().total_cmp(&a.get(y, k).abs()))
                .unwrap();
            if p != k {
                for j in 0..n {
                    let tmp = a.get(k, j);
                    a.set(k, j, a.get(p, j));
                    a.set(p, j, tmp);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = a.get(k, k);
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let l = a.get(i, k) / pivot;
                a.set(i, k, l);
                for j in k + 1..n {
                    a.set(i, j, a.get(i, j) - l * a.get(k, j));
                }
            }
        }
        Ok(Lu {
            factors: a,
            perm,
            swaps,
        })
    }

    pub fn det(&self) -> Result<f64> {
        Ok(self.lu()?.det())
    }

    /// Inverse by partial-pivot elimination; pivots below [`INVERSE_PIVOT_TOL`] are singular.
    pub fn inverse(&self) -> Result<Matrix> {
        self.lu()?.inverse(INVERSE_PIVOT_TOL)
    }

    /// Number of pivots exceeding `tol` under row elimination with partial pivoting.
    pub fn rank(&self, tol: f64) -> usize {
        let mut a = self.clone();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let p = (rank..m)
                .max_by(|&x, &y| a.get(x, col).abs().total_cmp(&a.get(y, col).abs()))
                .unwrap();
            if a.get(p, col).abs() <= tol {
                continue;
            }
            for j in 0..n {
                let tmp = a.get(rank, j);
                a.set(rank, j, a.get(p, j));
                a.set(p, j, tmp);
            }
            let pivot = a.get(rank, col);
            for i in rank + 1..m {
                let l = a.get(i, col) / pivot;
                for j in col..n {
                    a.set(i, j, a.get(i, j) - l * a.get(rank, j));
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for Matrix {
    /// One row per line, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).into_iter().map(fmt_plain).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Shortest round-trip decimal, with negative zero printed as `0`.
pub fn fmt_plain(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

/// Parses the matrix text format: one row per line, whitespace-separated numbers.
pub fn parse_matrix_text(text: &str) -> Result<Matrix> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{tok:?}: {e}")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Matrix::from_rows(&rows)
}

/// Packed LU factors `PA = LU` with unit-diagonal `L`.
#[derive(Debug, Clone)]
pub struct Lu {
    factors: Matrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn min_abs_pivot(&self) -> f64 {
        (0..self.factors.rows)
            .map(|i| self.factors.get(i, i).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn det(&self) -> f64 {
        if self.min_abs_pivot() < DET_PIVOT_TOL {
            return 0.0;
        }
        let sign = if self.swaps.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        (0..self.factors.rows)
            .map(|i| self.factors.get(i, i))
            .product::<f64>()
            * sign
    }

    pub fn inverse(&self, pivot_tol: f64) -> Result<Matrix> {
        let n = self.factors.rows;
        let min = self.min_abs_pivot();
        if n > 0 && min < pivot_tol {
            return Err(Error::Singular {
                pivot: min,
                threshold: pivot_tol,
            });
        }
        let lu = &self.factors;
        let mut inv = Matrix::zeros(n, n);
        for c in 0..n {
            // solve L y = P e_c, then U x = y
            let mut x: Vec<f64> = self
                .perm
                .iter()
                .map(|&p| if p == c { 1.0 } else { 0.0 })
                .collect();
            for i in 0..n {
                for k in 0..i {
                    x[i] -= lu.get(i, k) * x[k];
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    x[i] -= lu.get(i, k) * x[k];
                }
                x[i] /= lu.get(i, i);
            }
            for (i, v) in x.into_iter().enumerate() {
                inv.set(i, c, v);
            }
        }
        Ok(inv)
    }
}

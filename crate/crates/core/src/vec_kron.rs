//! Vectorization, matricization and Kronecker products.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// How a flat vector is reshaped into a `p × q` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VecLayout {
    /// `M[i, j] = x[i + j·p]`: consecutive runs of `p` entries fill the columns.
    ColumnMajor,
    /// `M[i, j] = x[j + i·q]`: consecutive runs of `q` entries fill the rows.
    RowMajor,
}

/// Column stacking: `vec(X)[i + j·p] = X[i, j]`.
pub fn vec(x: &Matrix) -> Vec<f64> {
    x.as_slice().to_vec()
}

pub fn unvec(x: &[f64], p: usize, q: usize, layout: VecLayout) -> Result<Matrix> {
    if x.len() != p * q {
        return Err(Error::dim(format!(
            "vector of length {} cannot fill a {p}x{q} matrix",
            x.len()
        )));
    }
    Ok(match layout {
        VecLayout::ColumnMajor => Matrix::from_col_major(p, q, x.to_vec())?,
        VecLayout::RowMajor => Matrix::from_fn(p, q, |i, j| x[j + i * q]),
    })
}

/// `A ⊗ B`: the block matrix whose `(i, j)` block is `a_ij · B`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (p, q) = (b.rows(), b.cols());
    Matrix::from_fn(a.rows() * p, a.cols() * q, |r, c| {
        a.get(r / p, c / q) * b.get(r % p, c % q)
    })
}

/// Kronecker product of column vectors.
pub fn kron_vec(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter()
        .flat_map(|&a| y.iter().map(move |&b| a * b))
        .collect()
}

/// `(Cᵀ ⊗ A) · vec(B)`, which equals `vec(A·B·C)`.
pub fn vec_sandwich(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<Vec<f64>> {
    if a.cols() != b.rows() || b.cols() != c.rows() {
        return Err(Error::dim(format!(
            "{}x{} · {}x{} · {}x{} is not conformable",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    kron(&c.transpose(), a).matvec(&vec(b))
}

/// `Tr(A·B)` for `A: m×n`, `B: n×m`, computed as `vec(Bᵀ)ᵀ · vec(A)`.
pub fn trace_via_vec(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.rows() != b.cols() || a.cols() != b.rows() {
        return Err(Error::dim(format!(
            "Tr(AB) needs A: m×n and B: n×m, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    // vec(B)ᵀ vec(A) would pair B[i,j] with A[i,j]; the trace pairs A[i,j] with B[j,i]
    Ok(vec(&b.transpose())
        .iter()
        .zip(vec(a))
        .map(|(x, y)| x * y)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn vec_examples() {
        assert_eq!(
            vec(&m(&[&[1.0, 2.0], &[3.0, 4.0]])),
            vec![1.0, 3.0, 2.0, 4.0]
        );
        let mut e = Matrix::zeros(2, 3);
        e.set(0, 1, 1.0);
        assert_eq!(vec(&e), vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn unvec_examples() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(
            unvec(&x, 2, 3, VecLayout::ColumnMajor).unwrap(),
            m(&[&[1.0, 3.0, 5.0], &[2.0, 4.0, 6.0]])
        );
        assert_eq!(
            unvec(&x, 2, 3, VecLayout::RowMajor).unwrap(),
            m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]])
        );
        assert!(unvec(&x, 2, 2, VecLayout::ColumnMajor).is_err());
    }

    #[test]
    fn kron_examples() {
        let b = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let expected = m(&[
            &[1.0, 2.0, 0.0, 0.0],
            &[3.0, 4.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 2.0],
            &[0.0, 0.0, 3.0, 4.0],
        ]);
        assert_eq!(kron(&Matrix::identity(2), &b), expected);
        assert_eq!(kron(&m(&[&[2.0]]), &m(&[&[3.0]])), m(&[&[6.0]]));
        assert_eq!(kron_vec(&[1.0, 2.0], &[3.0, 4.0]), vec![3.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn sandwich_identity_and_zero() {
        let b = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let out = vec_sandwich(&Matrix::identity(2), &b, &Matrix::identity(3)).unwrap();
        assert_eq!(out, vec(&b));
        let zero = vec_sandwich(&Matrix::zeros(2, 2), &b, &Matrix::identity(3)).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
        assert!(vec_sandwich(&Matrix::identity(3), &b, &Matrix::identity(3)).is_err());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(
            trace_via_vec(&Matrix::identity(3), &Matrix::identity(3)).unwrap(),
            3.0
        );
        // AB = [[19,22],[43,50]], trace 69
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = m(&[&[5.0, 6.0], &[7.0, 8.0]]);
        assert_eq!(trace_via_vec(&a, &b).unwrap(), 69.0);
        assert!(trace_via_vec(&a, &Matrix::zeros(3, 2)).is_err());
    }
}

//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use commutant::{DenseTensor, Matrix, Shape};
use proptest::prelude::*;

/// Every multi-index of `dims`, first index fastest.
pub fn indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        let mut next = Vec::with_capacity(out.len() * d);
        for i in 0..d {
            for ix in &out {
                let mut v: Vec<usize> = ix.clone();
                v.push(i);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

pub fn flat(dims: &[usize], ix: &[usize]) -> usize {
    let mut off = 0;
    let mut stride = 1;
    for (d, i) in dims.iter().zip(ix) {
        off += i * stride;
        stride *= d;
    }
    off
}

pub fn entry(t: &DenseTensor, ix: &[usize]) -> f64 {
    t.values()[flat(t.dims(), ix)]
}

pub fn tensor_from(dims: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> DenseTensor {
    let mut values = vec![0.0; dims.iter().product()];
    for ix in indices(dims) {
        values[flat(dims, &ix)] = f(&ix);
    }
    DenseTensor::new(Shape::new(dims.to_vec()).unwrap(), values).unwrap()
}

/// `(A ×_k M)[…i…] = Σ_j M[i, j] A[…j…]`.
pub fn mode_product(a: &DenseTensor, m: &Matrix, k: usize) -> DenseTensor {
    let mut dims = a.dims().to_vec();
    dims[k] = m.rows();
    tensor_from(&dims, |ix| {
        (0..m.cols())
            .map(|j| {
                let mut src = ix.to_vec();
                src[k] = j;
                m.get(ix[k], j) * entry(a, &src)
            })
            .sum()
    })
}

/// `Σ_{k⃗} A[i⃗; k⃗] B[k⃗; j⃗]`.
pub fn mul_2m(a: &DenseTensor, b: &DenseTensor) -> DenseTensor {
    let m = a.order() / 2;
    let (rows, inner) = a.dims().split_at(m);
    let cols = &b.dims()[m..];
    let mut dims = rows.to_vec();
    dims.extend_from_slice(cols);
    let inner_ix = indices(inner);
    tensor_from(&dims, |ix| {
        inner_ix
            .iter()
            .map(|k| {
                let mut ai = ix[..m].to_vec();
                ai.extend_from_slice(k);
                let mut bi = k.clone();
                bi.extend_from_slice(&ix[m..]);
                entry(a, &ai) * entry(b, &bi)
            })
            .sum()
    })
}

/// `Σ_{k⃗} A[i⃗; k⃗] X[k⃗]`.
pub fn mul_2m_on_m(a: &DenseTensor, x: &DenseTensor) -> DenseTensor {
    let m = x.order();
    let rows = &a.dims()[..m];
    let all = indices(x.dims());
    tensor_from(rows, |ix| {
        all.iter()
            .map(|k| {
                let mut ai = ix.to_vec();
                ai.extend_from_slice(k);
                entry(a, &ai) * entry(x, k)
            })
            .sum()
    })
}

/// `Σ_{k,l} A[i, j, k, l] B[k, l]`.
pub fn contract_34(a: &DenseTensor, b: &Matrix) -> Matrix {
    let d = a.dims();
    Matrix::from_fn(d[0], d[1], |i, j| {
        let mut s = 0.0;
        for k in 0..d[2] {
            for l in 0..d[3] {
                s += entry(a, &[i, j, k, l]) * b.get(k, l);
            }
        }
        s
    })
}

pub fn outer(vectors: &[Vec<f64>]) -> DenseTensor {
    let dims: Vec<usize> = vectors.iter().map(Vec::len).collect();
    tensor_from(&dims, |ix| {
        ix.iter().zip(vectors).map(|(&i, v)| v[i]).product()
    })
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &Matrix) -> f64 {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0);
    }
    (0..n)
        .map(|c| {
            let minor = Matrix::from_fn(n - 1, n - 1, |i, j| {
                m.get(i + 1, if j < c { j } else { j + 1 })
            });
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * m.get(0, c) * det(&minor)
        })
        .sum()
}

/// Sign of a 0-based permutation counted from its inversions.
pub fn inversion_sign(images: &[usize]) -> i32 {
    let mut inv = 0;
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            if images[a] > images[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn entries(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, len)
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    entries(rows * cols).prop_map(move |v| Matrix::from_col_major(rows, cols, v).unwrap())
}

pub fn tensor(dims: Vec<usize>) -> impl Strategy<Value = DenseTensor> {
    let len = dims.iter().product();
    entries(len).prop_map(move |v| DenseTensor::from_dims(&dims, v).unwrap())
}

/// Square matrix with `|det| ≥ 0.1`.
pub fn invertible(n: usize) -> impl Strategy<Value = Matrix> {
    matrix(n, n).prop_filter("well-conditioned", |m| m.det().unwrap().abs() >= 0.1)
}

/// Vector with Euclidean norm at least 0.1.
pub fn nonzero(n: usize) -> impl Strategy<Value = Vec<f64>> {
    entries(n).prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() >= 0.01)
}

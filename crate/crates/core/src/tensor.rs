//! Dense real tensors of arbitrary order.
//!
//! Values are stored in little-endian mixed-radix order: mode 1 varies fastest,
//! so the 0-based multi-index `(i_1, …, i_m)` lives at
//! `i_1 + i_2·d_1 + i_3·d_1·d_2 + …`. For an order-2 tensor this is column-major,
//! i.e. the flat values are `vec` of the matrix. For an order-`2m` tensor with
//! all extents `n`, the flat values read as an `n^m × n^m` column-major matrix are
//! exactly its balance unfolding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Extents of each mode. Always non-empty with every extent at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    dims: Vec<usize>,
    len: usize,
}

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Argument("tensor order must be at least 1".into()));
        }
        if dims.contains(&0) {
            return Err(Error::Argument(format!("zero extent in shape {dims:?}")));
        }
        let len = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::Argument(format!("shape {dims:?} overflows the index range")))?;
        Ok(Shape { dims, len })
    }

    /// `n × n × … × n` with `order` modes.
    pub fn cube(order: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; order])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The common extent when all modes have the same extent.
    pub fn uniform_extent(&self) -> Option<usize> {
        let n = self.dims[0];
        self.dims.iter().all(|&d| d == n).then_some(n)
    }

    #[inline]
    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        let mut off = 0;
        let mut stride = 1;
        for (&i, &d) in index.iter().zip(&self.dims) {
            debug_assert!(i < d);
            off += i * stride;
            stride *= d;
        }
        off
    }

    /// Inverse of [`Shape::offset`].
    pub fn unravel(&self, mut offset: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|&d| {
                let i = offset % d;
                offset /= d;
                i
            })
            .collect()
    }

    /// Iterates all 0-based multi-indices in storage order.
    pub fn indices(&self) -> MultiIndex {
        MultiIndex::new(self.dims.clone())
    }
}

/// Odometer over `0..d_1 × … × 0..d_m`, first mode fastest.
#[derive(Debug, Clone)]
pub struct MultiIndex {
    dims: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl MultiIndex {
    pub fn new(dims: Vec<usize>) -> Self {
        let current = if dims.contains(&0) {
            None
        } else {
            Some(vec![0; dims.len()])
        };
        MultiIndex { dims, current }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut k = 0;
        loop {
            if k == cur.len() {
                self.current = None;
                break;
            }
            cur[k] += 1;
            if cur[k] < self.dims[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
        Some(out)
    }
}

/// A dense real tensor. Immutable once built; every operation returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Shape,
    values: Vec<f64>,
}

impl DenseTensor {
    pub fn new(shape: Shape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.len() {
            return Err(Error::dim(format!(
                "{} values for shape {:?} ({} elements)",
                values.len(),
                shape.dims(),
                shape.len()
            )));
        }
        Ok(DenseTensor { shape, values })
    }

    pub fn from_dims(dims: &[usize], values: Vec<f64>) -> Result<Self> {
        Self::new(Shape::new(dims.to_vec())?, values)
    }

    pub fn zeros(shape: Shape) -> Self {
        let values = vec![0.0; shape.len()];
        DenseTensor { shape, values }
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let values = shape.indices().map(|idx| f(&idx)).collect();
        DenseTensor { shape, values }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        DenseTensor {
            shape: Shape::new(vec![m.rows(), m.cols()]).expect("matrix extents are positive"),
            values: m.as_slice().to_vec(),
        }
    }

    /// Reads an order-2 tensor as a matrix.
    pub fn to_matrix(&self) -> Result<Matrix> {
        match self.shape.dims() {
            [r, c] => Matrix::from_col_major(*r, *c, self.values.clone()),
            dims => Err(Error::dim(format!(
                "order-{} tensor is not a matrix",
                dims.len()
            ))),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[self.shape.offset(index)]
    }

    /// Returns a copy with one entry replaced.
    pub fn with_entry(&self, index: &[usize], v: f64) -> DenseTensor {
        let mut out = self.clone();
        out.values[self.shape.offset(index)] = v;
        out
    }

    pub fn scale(&self, s: f64) -> DenseTensor {
        DenseTensor {
            shape: self.shape.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.shape != other.shape {
            return Err(Error::dim(format!(
                "cannot add shapes {:?} and {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(DenseTensor {
            shape: self.shape.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest entrywise absolute difference; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &DenseTensor) -> f64 {
        if self.shape != other.shape {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn approx_eq(&self, other: &DenseTensor, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Full inner product `Σ A[i]·B[i]`.
    pub fn dot(&self, other: &DenseTensor) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::dim("inner product of differently shaped tensors"));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Mode-`k` product (`k` is 0-based): result entry is
    /// `Σ_j M[i_k, j] · A[…, j (slot k), …]`, so the mode-`k` extent becomes `M.rows()`.
    pub fn mode_n_product(&self, m: &Matrix, k: usize) -> Result<DenseTensor> {
        let order = self.order();
        if k >= order {
            return Err(Error::Mode { mode: k, order });
        }
        let dims = self.dims();
        if m.cols() != dims[k] {
            return Err(Error::dim(format!(
                "mode-{k} extent {} against a matrix with {} columns",
                dims[k],
                m.cols()
            )));
        }
        let inner: usize = dims[..k].iter().product();
        let outer: usize = dims[k + 1..].iter().product();
        let (src_k, dst_k) = (dims[k], m.rows());
        let mut out_dims = dims.to_vec();
        out_dims[k] = dst_k;
        let mut out = vec![0.0; inner * dst_k * outer];
        for o in 0..outer {
            for j in 0..src_k {
                let src = &self.values[(o * src_k + j) * inner..][..inner];
                for i in 0..dst_k {
                    let w = m.get(i, j);
                    if w == 0.0 {
                        continue;
                    }
                    let dst = &mut out[(o * dst_k + i) * inner..][..inner];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += w * s;
                    }
                }
            }
        }
        DenseTensor::from_dims(&out_dims, out)
    }

    /// `(A ×_{3,4} B)[i, j] = Σ_{k,l} A[i, j, k, l] · B[k, l]` for an order-4 `A`.
    pub fn contract_34(&self, b: &Matrix) -> Result<Matrix> {
        let [m, n, p, q] = self.dims() else {
            return Err(Error::dim(format!(
                "contract_34 needs an order-4 tensor, got order {}",
                self.order()
            )));
        };
        if (b.rows(), b.cols()) != (*p, *q) {
            return Err(Error::dim(format!(
                "trailing modes {p}x{q} against a {}x{} matrix",
                b.rows(),
                b.cols()
            )));
        }
        // trailing modes are the slow index: A is an (mn) × (pq) column-major block
        let a = Matrix::from_col_major(m * n, p * q, self.values.clone())?;
        let flat = a.matvec(b.as_slice())?;
        Matrix::from_col_major(*m, *n, flat)
    }

    /// Canonical `{"shape":[…],"values":[…]}` form.
    pub fn to_json(&self) -> String {
        crate::json::tensor(self)
    }

    /// Parses the form written by [`DenseTensor::to_json`]; malformed input,
    /// including a value count that disagrees with the shape, is a parse error.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: TensorRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        DenseTensor::try_from(record).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Order-`2m` product: `(AB)[i⃗; j⃗] = Σ_{k⃗} A[i⃗; k⃗] · B[k⃗; j⃗]`.
    ///
    /// Requires even orders and the last half of `A`'s modes to equal the first half of `B`'s.
    pub fn mul_2m(&self, other: &DenseTensor) -> Result<DenseTensor> {
        let (ra, ka) = split_even(self.dims())?;
        let (kb, cb) = split_even(other.dims())?;
        if ra.len() != cb.len() || ka != kb {
            return Err(Error::dim(format!(
                "cannot multiply {:?} by {:?}",
                self.dims(),
                other.dims()
            )));
        }
        let rows: usize = ra.iter().product();
        let inner: usize = ka.iter().product();
        let cols: usize = cb.iter().product();
        let mut out = vec![0.0; rows * cols];
        for c in 0..cols {
            for k in 0..inner {
                let b = other.values[k + c * inner];
                if b == 0.0 {
                    continue;
                }
                let col_a = &self.values[k * rows..][..rows];
                let dst = &mut out[c * rows..][..rows];
                for (d, a) in dst.iter_mut().zip(col_a) {
                    *d += a * b;
                }
            }
        }
        let mut dims = ra.to_vec();
        dims.extend_from_slice(cb);
        DenseTensor::from_dims(&dims, out)
    }

    /// Order-`2m` tensor acting on an order-`m` tensor: `(AX)[i⃗] = Σ_{k⃗} A[i⃗; k⃗] · X[k⃗]`.
    pub fn mul_2m_on_m(&self, x: &DenseTensor) -> Result<DenseTensor> {
        let (ra, ka) = split_even(self.dims())?;
        if ka != x.dims() {
            return Err(Error::dim(format!(
                "order-{} tensor {:?} cannot act on {:?}",
                self.order(),
                self.dims(),
                x.dims()
            )));
        }
        let rows: usize = ra.iter().product();
        let a = Matrix::from_col_major(rows, x.shape.len(), self.values.clone())?;
        DenseTensor::from_dims(ra, a.matvec(&x.values)?)
    }

    /// Balance unfolding of an order-`2m` tensor with all extents `n` into an
    /// `n^m × n^m` matrix: row index from the first `m` modes, column index from the
    /// last `m`, both little-endian mixed radix.
    pub fn balance_unfold(&self) -> Result<Matrix> {
        let (n, m) = balanced_params(self.shape())?;
        let side = n.pow(m as u32);
        Matrix::from_col_major(side, side, self.values.clone())
    }

    /// Inverse of [`DenseTensor::balance_unfold`] for an order-`2m`, extent-`n` target.
    pub fn refold(matrix: &Matrix, m: usize, n: usize) -> Result<DenseTensor> {
        if m == 0 || n == 0 {
            return Err(Error::Argument("refold needs m, n >= 1".into()));
        }
        let side = n
            .checked_pow(m as u32)
            .ok_or_else(|| Error::Argument("n^m overflows".into()))?;
        if matrix.rows() != side || matrix.cols() != side {
            return Err(Error::dim(format!(
                "{}x{} matrix cannot refold to order {} with extent {n}",
                matrix.rows(),
                matrix.cols(),
                2 * m
            )));
        }
        DenseTensor::new(Shape::cube(2 * m, n)?, matrix.as_slice().to_vec())
    }
}

fn split_even(dims: &[usize]) -> Result<(&[usize], &[usize])> {
    if !dims.len().is_multiple_of(2) {
        return Err(Error::dim(format!("order {} is odd", dims.len())));
    }
    Ok(dims.split_at(dims.len() / 2))
}

/// `(n, m)` for an order-`2m` tensor whose extents all equal `n`.
pub(crate) fn balanced_params(shape: &Shape) -> Result<(usize, usize)> {
    if !shape.order().is_multiple_of(2) {
        return Err(Error::dim(format!("order {} is odd", shape.order())));
    }
    let n = shape
        .uniform_extent()
        .ok_or_else(|| Error::dim(format!("ragged extents {:?}", shape.dims())))?;
    Ok((n, shape.order() / 2))
}

/// Wire form: `{"shape":[…],"values":[…]}` with values in storage order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorRecord {
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

impl TryFrom<TensorRecord> for DenseTensor {
    type Error = Error;

    fn try_from(r: TensorRecord) -> Result<Self> {
        DenseTensor::new(Shape::new(r.shape)?, r.values)
    }
}

impl From<&DenseTensor> for TensorRecord {
    fn from(t: &DenseTensor) -> Self {
        TensorRecord {
            shape: t.dims().to_vec(),
            values: t.values.clone(),
        }
    }
}

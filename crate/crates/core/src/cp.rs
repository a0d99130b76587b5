//! Rank-1 and CP-form tensors, symmetric powers and symmetric rank-1 extraction.

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::Matrix;
use crate::perm::Permutation;
use crate::tensor::{DenseTensor, Shape};

/// Relative threshold on 2×2 unfolding minors for rank-1 certification.
pub const RANK1_TOL: f64 = 1e-10;
/// Relative tolerance for the symmetry probe.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Outer product `α_1 × … × α_m`: entry `i⃗` is `Π_k α_k[i_k]`.
pub fn rank1<V: AsRef<[f64]>>(vectors: &[V]) -> Result<DenseTensor> {
    if vectors.is_empty() {
        return Err(Error::Argument(
            "rank-1 tensor needs at least one factor".into(),
        ));
    }
    if let Some(k) = vectors
        .iter()
        .position(|v| v.as_ref().iter().all(|&x| x == 0.0))
    {
        return Err(Error::Domain(format!(
            "factor {} is the zero vector",
            k + 1
        )));
    }
    let shape = Shape::new(vectors.iter().map(|v| v.as_ref().len()).collect())?;
    Ok(DenseTensor::from_fn(shape, |ix| {
        vectors
            .iter()
            .zip(ix)
            .map(|(v, &i)| v.as_ref()[i])
            .product()
    }))
}

/// `x^m = x × … × x`, exactly invariant under every mode permutation.
pub fn sym_power(x: &[f64], m: usize) -> Result<DenseTensor> {
    if m == 0 {
        return Err(Error::Argument("power must be at least 1".into()));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::Domain(
            "cannot raise the zero vector to a power".into(),
        ));
    }
    let mut sorted = vec![0; m];
    Ok(DenseTensor::from_fn(Shape::cube(m, x.len())?, |ix| {
        // a fixed multiplication order keeps permuted entries bit-identical
        sorted.copy_from_slice(ix);
        sorted.sort_unstable();
        sorted.iter().map(|&i| x[i]).product()
    }))
}

/// Rank of `m` under partial-pivot elimination, counting pivots above `tol`.
pub fn matrix_rank(m: &Matrix, tol: f64) -> usize {
    m.rank(tol)
}

/// Mode-`k` unfolding (0-based): row `i_k`, columns over the remaining modes in
/// little-endian order.
pub fn mode_unfold(t: &DenseTensor, k: usize) -> Result<Matrix> {
    let dims = t.dims();
    if k >= dims.len() {
        return Err(Error::Mode {
            mode: k + 1,
            order: dims.len(),
        });
    }
    let before: usize = dims[..k].iter().product();
    let nk = dims[k];
    let cols = t.values().len() / nk;
    let mut out = Matrix::zeros(nk, cols);
    for (off, &v) in t.values().iter().enumerate() {
        let lo = off % before;
        let i = (off / before) % nk;
        let hi = off / (before * nk);
        out.set(i, lo + hi * before, v);
    }
    Ok(out)
}

/// Whether every 2×2 minor of `m` is at most `rel_tol · max|m|²` in magnitude.
fn minors_vanish(m: &Matrix, rel_tol: f64) -> bool {
    let scale = m.max_abs();
    let tol = rel_tol * scale * scale;
    for r1 in 0..m.rows() {
        for r2 in r1 + 1..m.rows() {
            for c1 in 0..m.cols() {
                for c2 in c1 + 1..m.cols() {
                    let minor = m.get(r1, c1) * m.get(r2, c2) - m.get(r1, c2) * m.get(r2, c1);
                    if minor.abs() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Certifies a nonzero tensor as rank-1: every mode unfolding has vanishing 2×2 minors.
pub fn is_rank1(t: &DenseTensor, rel_tol: f64) -> bool {
    if t.max_abs() == 0.0 {
        return false;
    }
    (0..t.order()).all(|k| mode_unfold(t, k).is_ok_and(|u| minors_vanish(&u, rel_tol)))
}

/// Whether `t` has equal extents and is invariant under every swap of adjacent modes.
pub fn is_symmetric(t: &DenseTensor) -> bool {
    let m = t.order();
    if t.shape().uniform_extent().is_none() {
        return false;
    }
    let tol = SYMMETRY_TOL * t.max_abs().max(1.0);
    let mut swapped = vec![0; m];
    for k in 0..m.saturating_sub(1) {
        for ix in t.shape().indices() {
            if ix[k] <= ix[k + 1] {
                continue;
            }
            swapped.copy_from_slice(&ix);
            swapped.swap(k, k + 1);
            if (t.get(&ix) - t.get(&swapped)).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Recovers `(λ, y)` with `T = λ·y^m`, `‖y‖ = 1`.
///
/// For even `m` the first nonzero coordinate of `y` is positive and `λ` carries
/// the sign. For odd `m` the sign is moved into `y` so that `λ > 0`.
pub fn extract_sym_rank1(t: &DenseTensor) -> Result<(f64, Vec<f64>)> {
    if !is_symmetric(t) {
        return Err(Error::Symmetry(format!("shape {:?}", t.dims())));
    }
    let unfolded = mode_unfold(t, 0)?;
    if t.max_abs() == 0.0 {
        return Err(Error::Rank("zero tensor".into()));
    }
    if !minors_vanish(&unfolded, RANK1_TOL) {
        return Err(Error::Rank(
            "mode-1 unfolding has a nonvanishing 2x2 minor".into(),
        ));
    }
    let norm = |c: &[f64]| c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let best = (0..unfolded.cols())
        .max_by(|&a, &b| norm(unfolded.col(a)).total_cmp(&norm(unfolded.col(b))))
        .expect("at least one column");
    let col = unfolded.col(best);
    let len = norm(col);
    let mut y: Vec<f64> = col.iter().map(|v| v / len).collect();
    let lead = y
        .iter()
        .copied()
        .find(|v| v.abs() > 1e-12)
        .expect("unit vector has a nonzero coordinate");
    if lead < 0.0 {
        y.iter_mut().for_each(|v| *v = -*v);
    }
    let m = t.order();
    let mut lambda = t.dot(&sym_power(&y, m)?)?;
    if m % 2 == 1 && lambda < 0.0 {
        lambda = -lambda;
        y.iter_mut().for_each(|v| *v = -*v);
    }
    Ok((lambda, y))
}

/// `Σ_j α_{1j} × … × α_{mj}`, factor `k` holding `α_{kj}` as column `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CpForm {
    n: usize,
    factors: Vec<Matrix>,
}

impl CpForm {
    pub fn new(factors: Vec<Matrix>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::Argument("CP form needs at least one factor".into()))?;
        let (n, r) = (first.rows(), first.cols());
        if n == 0 || r == 0 {
            return Err(Error::Argument("CP factors must be nonempty".into()));
        }
        if let Some(k) = factors.iter().position(|f| f.rows() != n || f.cols() != r) {
            return Err(Error::dim(format!(
                "factor {} is {}x{}, expected {n}x{r}",
                k + 1,
                factors[k].rows(),
                factors[k].cols()
            )));
        }
        for (k, f) in factors.iter().enumerate() {
            if let Some(j) = (0..r).find(|&j| f.col(j).iter().all(|&v| v == 0.0)) {
                return Err(Error::Domain(format!(
                    "column {} of factor {} is the zero vector",
                    j + 1,
                    k + 1
                )));
            }
        }
        Ok(CpForm { n, factors })
    }

    pub fn m(&self) -> usize {
        self.factors.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.factors[0].cols()
    }

    pub fn factors(&self) -> &[Matrix] {
        &self.factors
    }

    pub fn materialize(&self) -> DenseTensor {
        let shape = Shape::cube(self.m(), self.n).expect("validated extents");
        DenseTensor::from_fn(shape, |ix| {
            (0..self.rank())
                .map(|j| {
                    self.factors
                        .iter()
                        .zip(ix)
                        .map(|(f, &i)| f.get(i, j))
                        .product::<f64>()
                })
                .sum()
        })
    }

    /// CP form of `permute_modes(materialize(self), σ)`: slot `l` takes factor `σ⁻¹(l)`.
    pub fn permute_factors(&self, sigma: &Permutation) -> Result<CpForm> {
        if sigma.len() != self.m() {
            return Err(Error::dim(format!(
                "permutation of {} slots on {} factors",
                sigma.len(),
                self.m()
            )));
        }
        let inv = sigma.inverse();
        Ok(CpForm {
            n: self.n,
            factors: (0..self.m())
                .map(|l| self.factors[inv.apply(l)].clone())
                .collect(),
        })
    }

    pub fn to_json(&self) -> String {
        json::object(&[
            ("m", self.m().to_string()),
            ("n", self.n.to_string()),
            ("rank", self.rank().to_string()),
            ("factors", json::matrix_list(&self.factors)),
        ])
    }
}

/// `Σ_j w_j · v_j^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymCpForm {
    m: usize,
    vectors: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl SymCpForm {
    pub fn new(m: usize, vectors: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if m == 0 || vectors.is_empty() {
            return Err(Error::Argument(
                "symmetric CP form needs m >= 1 and a term".into(),
            ));
        }
        if vectors.len() != weights.len() {
            return Err(Error::dim(format!(
                "{} vectors with {} weights",
                vectors.len(),
                weights.len()
            )));
        }
        let n = vectors[0].len();
        if n == 0 || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::dim("vectors must share a positive length"));
        }
        if let Some(j) = vectors.iter().position(|v| v.iter().all(|&x| x == 0.0)) {
            return Err(Error::Domain(format!("vector {} is zero", j + 1)));
        }
        Ok(SymCpForm {
            m,
            vectors,
            weights,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn materialize(&self) -> DenseTensor {
        let shape = Shape::cube(self.m, self.n()).expect("validated extents");
        DenseTensor::from_fn(shape, |ix| {
            self.vectors
                .iter()
                .zip(&self.weights)
                .map(|(v, w)| w * ix.iter().map(|&i| v[i]).product::<f64>())
                .sum()
        })
    }

    /// Replaces every `v_j` by `B·v_j`.
    pub fn map_vectors(&self, b: &Matrix) -> Result<SymCpForm> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| b.matvec(v))
            .collect::<Result<Vec<_>>>()?;
        SymCpForm::new(self.m, vectors, self.weights.clone())
    }
}

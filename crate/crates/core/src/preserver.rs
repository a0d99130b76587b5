//! Linear rank and determinant preservers on matrices and tensors.

use serde::{Deserialize, Serialize};

use crate::cp::{is_rank1, is_symmetric, matrix_rank, rank1, SymCpForm};
use crate::ctensor::{complete_product, complete_right_product, permute_modes, Gct};
use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{Matrix, INVERSE_PIVOT_TOL};
use crate::perm::Permutation;
use crate::rng;
use crate::tensor::{DenseTensor, Shape};

/// Relative threshold used when certifying preserver outputs as rank-1.
pub const CERTIFY_TOL: f64 = 1e-9;
/// Tolerance on `|det(PQ) - 1|`.
pub const DET_TOL: f64 = 1e-9;
/// Tolerance for the identity-fixing check.
pub const FIX_TOL: f64 = 1e-12;

fn check_invertible(b: &Matrix) -> Result<()> {
    let pivot = b.lu()?.min_abs_pivot();
    if pivot < INVERSE_PIVOT_TOL {
        return Err(Error::Singular {
            pivot,
            threshold: INVERSE_PIVOT_TOL,
        });
    }
    Ok(())
}

/// `A ↦ ℬ × A × 𝒦^τ` with `ℬ = B_1 × … × B_m`.
///
/// On a rank-1 input `α_1 × … × α_m` the image is `B_1α_{τ(1)} × … × B_mα_{τ(m)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankPreserver {
    n: usize,
    matrices: Vec<Matrix>,
    tau: Permutation,
}

impl RankPreserver {
    pub fn new(matrices: Vec<Matrix>, tau: Permutation) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::Argument(
                "a rank preserver needs at least one matrix".into(),
            ));
        }
        if matrices.len() != tau.len() {
            return Err(Error::dim(format!(
                "{} matrices with a permutation of {} slots",
                matrices.len(),
                tau.len()
            )));
        }
        let n = matrices[0].rows();
        if let Some(k) = matrices.iter().position(|b| b.rows() != n || b.cols() != n) {
            return Err(Error::dim(format!(
                "matrix {} is {}x{}, expected {n}x{n}",
                k + 1,
                matrices[k].rows(),
                matrices[k].cols()
            )));
        }
        for b in &matrices {
            check_invertible(b)?;
        }
        Ok(RankPreserver { n, matrices, tau })
    }

    pub fn identity(m: usize, n: usize) -> Result<Self> {
        Self::new(vec![Matrix::identity(n); m], Permutation::identity(m))
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    fn check_operand(&self, a: &DenseTensor) -> Result<()> {
        if a.order() != self.m() || a.shape().uniform_extent() != Some(self.n) {
            return Err(Error::dim(format!(
                "preserver on order {} extent {} applied to {:?}",
                self.m(),
                self.n,
                a.dims()
            )));
        }
        Ok(())
    }

    /// Mode products with each `B_k` applied after the slot shuffle.
    pub fn apply(&self, a: &DenseTensor) -> Result<DenseTensor> {
        self.check_operand(a)?;
        complete_product(&permute_modes(a, &self.tau.inverse())?, &self.matrices)
    }

    /// Same map through the dense order-`2m` tensor `ℬ`.
    pub fn apply_dense(&self, a: &DenseTensor) -> Result<DenseTensor> {
        self.check_operand(a)?;
        let b = Gct::new(self.matrices.clone())?.to_dense();
        b.mul_2m_on_m(&permute_modes(a, &self.tau.inverse())?)
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &RankPreserver) -> Result<RankPreserver> {
        if self.m() != other.m() || self.n != other.n {
            return Err(Error::dim(format!(
                "composing (m={}, n={}) with (m={}, n={})",
                self.m(),
                self.n,
                other.m(),
                other.n
            )));
        }
        let matrices = (0..self.m())
            .map(|k| self.matrices[k].matmul(&other.matrices[self.tau.apply(k)]))
            .collect();
        RankPreserver::new(matrices, self.tau.then(&other.tau))
    }

    /// `{"m":…,"n":…,"tau":[…],"matrices":[[[…]]]}` with a 1-based `tau`.
    pub fn to_json(&self) -> String {
        json::object(&[
            ("m", self.m().to_string()),
            ("n", self.n.to_string()),
            ("tau", json::int_array(&self.tau.to_one_based())),
            ("matrices", json::matrix_list(&self.matrices)),
        ])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: PreserverRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        record.try_into()
    }
}

/// Wire form of a [`RankPreserver`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreserverRecord {
    pub m: usize,
    pub n: usize,
    pub tau: Vec<usize>,
    pub matrices: Vec<Vec<Vec<f64>>>,
}

impl TryFrom<PreserverRecord> for RankPreserver {
    type Error = Error;

    fn try_from(r: PreserverRecord) -> Result<Self> {
        if r.matrices.len() != r.m || r.tau.len() != r.m {
            return Err(Error::Parse(format!(
                "m = {} but {} matrices and {} tau entries",
                r.m,
                r.matrices.len(),
                r.tau.len()
            )));
        }
        let tau = Permutation::from_one_based(&r.tau).map_err(|e| Error::Parse(e.to_string()))?;
        let matrices = r
            .matrices
            .iter()
            .map(|rows| Matrix::from_rows(rows).map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let p = RankPreserver::new(matrices, tau)?;
        if p.n != r.n {
            return Err(Error::Parse(format!(
                "n = {} but matrices are {}x{}",
                r.n, p.n, p.n
            )));
        }
        Ok(p)
    }
}

/// `X ↦ X ×_1 B ×_2 B … ×_m B` on symmetric order-`m` tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPreserver {
    b: Matrix,
    m: usize,
}

impl SymPreserver {
    pub fn new(b: Matrix, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Argument("order must be at least 1".into()));
        }
        if !b.is_square() {
            return Err(Error::dim(format!(
                "{}x{} is not square",
                b.rows(),
                b.cols()
            )));
        }
        check_invertible(&b)?;
        Ok(SymPreserver { b, m })
    }

    /// As [`SymPreserver::new`], additionally requiring every entry of `B` to be nonnegative.
    pub fn new_nonnegative(b: Matrix, m: usize) -> Result<Self> {
        if b.as_slice().iter().any(|&v| v < 0.0) {
            return Err(Error::Domain("B has a negative entry".into()));
        }
        Self::new(b, m)
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn apply(&self, x: &DenseTensor) -> Result<DenseTensor> {
        if x.order() != self.m || x.shape().uniform_extent() != Some(self.n()) {
            return Err(Error::dim(format!(
                "symmetric preserver on order {} extent {} applied to {:?}",
                self.m,
                self.n(),
                x.dims()
            )));
        }
        if !is_symmetric(x) {
            return Err(Error::Symmetry("preserver input".into()));
        }
        complete_right_product(x, &self.b)
    }

    /// Factor-level image: every `α_j` becomes `Bα_j`.
    pub fn apply_form(&self, x: &SymCpForm) -> Result<SymCpForm> {
        if x.m() != self.m {
            return Err(Error::dim(format!(
                "order {} form, order {} preserver",
                x.m(),
                self.m
            )));
        }
        x.map_vectors(&self.b)
    }

    pub fn fixes_identity(&self) -> bool {
        let id = identity_tensor(self.m, self.n()).expect("validated sizes");
        self.apply(&id).is_ok_and(|img| img.approx_eq(&id, FIX_TOL))
    }
}

/// `A ↦ PAQ`, or `A ↦ PAᵀQ` when `transposed`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPreserver {
    p: Matrix,
    q: Matrix,
    transposed: bool,
}

impl MatrixPreserver {
    pub fn new(p: Matrix, q: Matrix, transposed: bool) -> Result<Self> {
        if !p.is_square() || p.rows() != q.rows() || p.cols() != q.cols() {
            return Err(Error::dim(format!(
                "P is {}x{}, Q is {}x{}",
                p.rows(),
                p.cols(),
                q.rows(),
                q.cols()
            )));
        }
        check_invertible(&p)?;
        check_invertible(&q)?;
        Ok(MatrixPreserver { p, q, transposed })
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn transposed(&self) -> bool {
        self.transposed
    }

    pub fn apply(&self, a: &Matrix) -> Result<Matrix> {
        let n = self.p.rows();
        if a.rows() != n || a.cols() != n {
            return Err(Error::dim(format!(
                "{}x{} operand, expected {n}x{n}",
                a.rows(),
                a.cols()
            )));
        }
        let a = if self.transposed {
            a.transpose()
        } else {
            a.clone()
        };
        Ok(self.p.matmul(&a).matmul(&self.q))
    }

    /// `X ×_1 P ×_2 Qᵀ`, with `X` the mode-swapped operand in the transposed branch.
    pub fn apply_unified(&self, a: &Matrix) -> Result<Matrix> {
        self.to_rank_preserver()?
            .apply(&DenseTensor::from_matrix(a))?
            .to_matrix()
    }

    /// The order-2 [`RankPreserver`] with `B_1 = P`, `B_2 = Qᵀ` and `τ` the swap
    /// exactly when `transposed`.
    pub fn to_rank_preserver(&self) -> Result<RankPreserver> {
        let tau = if self.transposed {
            Permutation::from_images(vec![1, 0])?
        } else {
            Permutation::identity(2)
        };
        RankPreserver::new(vec![self.p.clone(), self.q.transpose()], tau)
    }

    pub fn is_determinant_preserver(&self) -> bool {
        self.p
            .matmul(&self.q)
            .det()
            .is_ok_and(|d| (d - 1.0).abs() <= DET_TOL)
    }
}

/// Order-`m` tensor with 1 exactly where all indices agree.
pub fn identity_tensor(m: usize, n: usize) -> Result<DenseTensor> {
    if m == 0 || n == 0 {
        return Err(Error::Argument("identity tensor needs m, n >= 1".into()));
    }
    Ok(DenseTensor::from_fn(Shape::cube(m, n)?, |ix| {
        if ix.iter().all(|&i| i == ix[0]) {
            1.0
        } else {
            0.0
        }
    }))
}

/// Outcome of [`verify_rank_preservation`]; `failures` lists 0-based trial indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<usize>,
}

impl RankReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        json::object(&[
            ("trials", self.trials.to_string()),
            ("passed", self.passed.to_string()),
            ("failures", json::int_array(&self.failures)),
        ])
    }
}

/// Whether `t` is certified rank-1: matrix rank for order 2, unfolding minors above.
pub fn certify_rank1(t: &DenseTensor) -> bool {
    if t.order() == 2 {
        let scale = t.max_abs();
        return scale > 0.0
            && t.to_matrix()
                .is_ok_and(|mat| matrix_rank(&mat, CERTIFY_TOL * scale) == 1);
    }
    is_rank1(t, CERTIFY_TOL)
}

/// Pushes `trials` random rank-1 tensors through `phi` and certifies each image.
///
/// Trial `t` draws from stream `(seed, 0, t)`.
pub fn verify_rank_preservation(phi: &RankPreserver, trials: usize, seed: u64) -> RankReport {
    let failures: Vec<usize> = (0..trials)
        .filter(|&t| {
            let mut r = rng::stream(seed, 0, t as u32);
            let factors: Vec<Vec<f64>> = (0..phi.m())
                .map(|_| rng::nonzero_vector(&mut r, phi.n()))
                .collect();
            let ok = rank1(&factors)
                .and_then(|a| phi.apply(&a))
                .is_ok_and(|img| certify_rank1(&img));
            !ok
        })
        .collect();
    RankReport {
        trials,
        passed: trials - failures.len(),
        failures,
    }
}

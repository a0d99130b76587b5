//! Commutation tensors, generalized commutation tensors and mode permutations.
//!
//! All higher-order products here are the order-`2m` contraction
//! [`DenseTensor::mul_2m`], with the first `m` modes acting as the row group and
//! the last `m` as the column group.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::Matrix;
use crate::perm::Permutation;
use crate::tensor::{balanced_params, DenseTensor, Shape};

/// Fourth-order 0/1 tensor `𝒦` with `𝒦 ×_{3,4} X = Xᵀ` for every `rows × cols` matrix `X`.
///
/// The backing tensor has shape `cols × rows × rows × cols`, and entry
/// `(i, j, k, l)` is 1 exactly when `i == l` and `j == k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutationTensor {
    rows: usize,
    cols: usize,
    backing: DenseTensor,
}

impl CommutationTensor {
    /// The commutation tensor for `rows × cols` operands.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Argument(format!(
                "commutation tensor sizes must be positive, got ({rows}, {cols})"
            )));
        }
        let shape = Shape::new(vec![cols, rows, rows, cols])?;
        let backing = DenseTensor::from_fn(shape, |ix| indicator(ix[0] == ix[3] && ix[1] == ix[2]));
        Ok(CommutationTensor {
            rows,
            cols,
            backing,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn backing(&self) -> &DenseTensor {
        &self.backing
    }

    pub fn into_dense(self) -> DenseTensor {
        self.backing
    }

    /// `𝒦 ×_{3,4} X`, which is `Xᵀ`.
    pub fn transpose(&self, x: &Matrix) -> Result<Matrix> {
        self.backing.contract_34(x)
    }

    /// Pairs modes (1,2) into rows and (3,4) into columns, little-endian, giving
    /// the commutation matrix `K_{rows,cols}`.
    pub fn flatten(&self) -> Matrix {
        let (c, r) = (self.cols, self.rows);
        Matrix::from_col_major(c * r, r * c, self.backing.values().to_vec())
            .expect("backing holds (cr)^2 values")
    }
}

#[inline]
fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// `𝒦^{id}`: the order-`2m` identity for [`DenseTensor::mul_2m`], 1 iff `i⃗ == j⃗`.
pub fn identity_2m(m: usize, n: usize) -> Result<DenseTensor> {
    let shape = Shape::cube(2 * m, n)?;
    Ok(DenseTensor::from_fn(shape, |ix| {
        indicator(ix[..m] == ix[m..])
    }))
}

/// `𝒦^k` for the square commutation tensor `𝒦 = 𝒦_{n,n}` under `mul_2m`.
pub fn ctensor_power(k: usize, n: usize) -> Result<DenseTensor> {
    if k == 0 {
        return Err(Error::Argument(
            "tensor power exponent must be at least 1".into(),
        ));
    }
    let base = CommutationTensor::new(n, n)?.into_dense();
    let mut acc = base.clone();
    for _ in 1..k {
        acc = acc.mul_2m(&base)?;
    }
    Ok(acc)
}

/// Generalized commutation tensor `B_1 × B_2 × … × B_m` held as its generators.
///
/// Dense entry `(i⃗; j⃗)` is `Π_k B_k[i_k, j_k]`. With every generator equal to
/// the permutation matrix of `π ∈ S_n` this is `𝒦^π`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gct {
    n: usize,
    generators: Vec<Matrix>,
}

impl Gct {
    pub fn new(generators: Vec<Matrix>) -> Result<Self> {
        let n = generators
            .first()
            .ok_or_else(|| Error::Argument("a GCT needs at least one generator".into()))?
            .rows();
        if generators.iter().any(|g| g.rows() != n || g.cols() != n) {
            return Err(Error::dim(format!(
                "generators must all be {n}x{n}: {:?}",
                generators
                    .iter()
                    .map(|g| (g.rows(), g.cols()))
                    .collect::<Vec<_>>()
            )));
        }
        if n == 0 {
            return Err(Error::Argument(
                "generator dimension must be positive".into(),
            ));
        }
        Ok(Gct { n, generators })
    }

    /// `𝒦^{id} = I_n × … × I_n`.
    pub fn identity(m: usize, n: usize) -> Result<Self> {
        Self::new(vec![Matrix::identity(n); m])
    }

    /// `𝒦^π` of order `2m` for `π ∈ S_n`.
    pub fn from_permutation(pi: &Permutation, m: usize) -> Result<Self> {
        Self::new(vec![pi.matrix(); m])
    }

    /// `A^{×m} = A × … × A`.
    pub fn power_of(a: &Matrix, m: usize) -> Result<Self> {
        Self::new(vec![a.clone(); m])
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Materializes all `n^{2m}` entries.
    pub fn to_dense(&self) -> DenseTensor {
        let m = self.m();
        let shape = Shape::cube(2 * m, self.n).expect("positive extents");
        DenseTensor::from_fn(shape, |ix| {
            self.generators
                .iter()
                .enumerate()
                .map(|(k, g)| g.get(ix[k], ix[m + k]))
                .product()
        })
    }

    /// Slotwise product; its dense form equals `mul_2m` of the dense forms.
    pub fn multiply(&self, other: &Gct) -> Result<Gct> {
        if self.m() != other.m() || self.n != other.n {
            return Err(Error::dim(format!(
                "GCT (m={}, n={}) times (m={}, n={})",
                self.m(),
                self.n,
                other.m(),
                other.n
            )));
        }
        Gct::new(
            self.generators
                .iter()
                .zip(&other.generators)
                .map(|(a, b)| a.matmul(b))
                .collect(),
        )
    }

    /// Slotwise inverse; fails if any generator is numerically singular.
    pub fn inverse(&self) -> Result<Gct> {
        Gct::new(
            self.generators
                .iter()
                .map(Matrix::inverse)
                .collect::<Result<_>>()?,
        )
    }

    /// `B_1 × … × B_m` acting on an order-`m` tensor: mode `k` is multiplied by `B_k`.
    pub fn act(&self, x: &DenseTensor) -> Result<DenseTensor> {
        if x.order() != self.m() {
            return Err(Error::dim(format!(
                "GCT with {} slots acting on an order-{} tensor",
                self.m(),
                x.order()
            )));
        }
        complete_product(x, &self.generators)
    }

    /// `{"m":…,"n":…,"generators":[[[…]]]}` with generators as row arrays.
    pub fn to_json(&self) -> String {
        json::object(&[
            ("m", self.m().to_string()),
            ("n", self.n.to_string()),
            ("generators", json::matrix_list(&self.generators)),
        ])
    }
}

/// The order-`2m` tensor `𝒦^τ` with entry `(i⃗; j⃗) = 1` iff `j_k = i_{τ(k)}` for all `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePermTensor {
    n: usize,
    tau: Permutation,
}

impl ModePermTensor {
    pub fn new(tau: Permutation, n: usize) -> Result<Self> {
        if tau.is_empty() || n == 0 {
            return Err(Error::Argument(
                "mode permutation tensor needs m, n >= 1".into(),
            ));
        }
        Ok(ModePermTensor { n, tau })
    }

    pub fn m(&self) -> usize {
        self.tau.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    pub fn to_dense(&self) -> DenseTensor {
        let m = self.m();
        let shape = Shape::cube(2 * m, self.n).expect("positive extents");
        DenseTensor::from_fn(shape, |ix| {
            indicator((0..m).all(|k| ix[m + k] == ix[self.tau.apply(k)]))
        })
    }
}

/// Index shuffle `A^τ[i⃗] = A[i_{τ(1)}, …, i_{τ(m)}]` (0-based `τ` on mode slots).
///
/// For a rank-1 input `α_1 × … × α_m` this moves factor `k` to slot `τ⁻¹(k)`.
pub fn permute_modes(a: &DenseTensor, tau: &Permutation) -> Result<DenseTensor> {
    let m = a.order();
    if tau.len() != m {
        return Err(Error::dim(format!(
            "permutation of {} slots on an order-{m} tensor",
            tau.len()
        )));
    }
    let n = a
        .shape()
        .uniform_extent()
        .ok_or_else(|| Error::dim(format!("ragged extents {:?}", a.dims())))?;
    let mut src = vec![0; m];
    Ok(DenseTensor::from_fn(a.shape().clone(), |ix| {
        debug_assert!(ix.iter().all(|&i| i < n));
        for (k, s) in src.iter_mut().enumerate() {
            *s = ix[tau.apply(k)];
        }
        a.get(&src)
    }))
}

/// `A ×_1 B_1 ×_2 B_2 … ×_m B_m`.
pub fn complete_product(a: &DenseTensor, matrices: &[Matrix]) -> Result<DenseTensor> {
    if matrices.len() != a.order() {
        return Err(Error::dim(format!(
            "{} matrices for an order-{} tensor",
            matrices.len(),
            a.order()
        )));
    }
    matrices
        .iter()
        .enumerate()
        .try_fold(a.clone(), |acc, (k, b)| acc.mode_n_product(b, k))
}

/// Right complete product `A ×_1 B ×_2 B … ×_m B` with one square `B`.
///
/// On `α_1 × … × α_m` this yields `Bα_1 × … × Bα_m`; for a matrix it is `B·A·Bᵀ`.
pub fn complete_right_product(a: &DenseTensor, b: &Matrix) -> Result<DenseTensor> {
    if !b.is_square() {
        return Err(Error::dim(format!(
            "{}x{} is not square",
            b.rows(),
            b.cols()
        )));
    }
    if a.shape().uniform_extent() != Some(b.rows()) {
        return Err(Error::dim(format!(
            "tensor extents {:?} against a {}x{} matrix",
            a.dims(),
            b.rows(),
            b.cols()
        )));
    }
    complete_product(a, &vec![b.clone(); a.order()])
}

/// Number of random `(τ, index)` probes used above order 6.
const PAIR_SYMMETRY_SAMPLES: usize = 1000;

/// Whether `A[i_{τ(1)}…i_{τ(m)}; j_{τ(1)}…j_{τ(m)}] == A[i⃗; j⃗]` for all `τ ∈ S_m`.
///
/// Exhaustive for `m ≤ 3`; above that, 1000 deterministic random probes.
pub fn is_pair_symmetric(a: &DenseTensor) -> Result<bool> {
    let (n, m) = balanced_params(a.shape())?;
    let tol = 1e-12 * a.max_abs().max(1.0);
    let permuted_entry = |ix: &[usize], tau: &Permutation| {
        let mut src = vec![0; 2 * m];
        for k in 0..m {
            src[k] = ix[tau.apply(k)];
            src[m + k] = ix[m + tau.apply(k)];
        }
        a.get(&src)
    };
    if m <= 3 {
        for tau in Permutation::all(m).iter().filter(|t| !t.is_identity()) {
            for ix in a.shape().indices() {
                if (permuted_entry(&ix, tau) - a.get(&ix)).abs() > tol {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    let all = Permutation::all(m);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..PAIR_SYMMETRY_SAMPLES {
        let tau = &all[rng.gen_range(0..all.len())];
        let ix: Vec<usize> = (0..2 * m).map(|_| rng.gen_range(0..n)).collect();
        if (permuted_entry(&ix, tau) - a.get(&ix)).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the balance unfolding is a permutation matrix.
pub fn is_balanced_permutation(a: &DenseTensor) -> Result<bool> {
    Ok(a.balance_unfold()?.is_permutation_matrix())
}

/// Entries at or below this count as zero in the generalized-permutation check.
pub const POSITIVE_TOL: f64 = 1e-12;
/// Tolerance for `AB = BA = 𝒦^{id}` when checking a claimed inverse pair.
pub const INVERSE_PAIR_TOL: f64 = 1e-9;

/// Positions `(row, col)` of the single positive entry in each row of an unfolding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedPermutation {
    pub positions: Vec<(usize, usize)>,
}

/// For entrywise nonnegative, mutually inverse order-`2m` tensors `A` and `B`,
/// confirms that the balance unfolding of `A` is a generalized permutation matrix.
pub fn check_nonneg_inverse(a: &DenseTensor, b: &DenseTensor) -> Result<GeneralizedPermutation> {
    let (n, m) = balanced_params(a.shape())?;
    if a.shape() != b.shape() {
        return Err(Error::dim(format!(
            "shapes {:?} and {:?} differ",
            a.dims(),
            b.dims()
        )));
    }
    if a.values().iter().chain(b.values()).any(|&v| v < 0.0) {
        return Err(Error::Domain("inputs must be entrywise nonnegative".into()));
    }
    let id = identity_2m(m, n)?;
    let ab = a.mul_2m(b)?.max_abs_diff(&id);
    let ba = b.mul_2m(a)?.max_abs_diff(&id);
    if ab > INVERSE_PAIR_TOL || ba > INVERSE_PAIR_TOL {
        return Err(Error::Precondition(format!(
            "tensors are not mutually inverse (|AB - I| = {ab:e}, |BA - I| = {ba:e})"
        )));
    }
    let unfolded = a.balance_unfold()?;
    let side = unfolded.rows();
    let mut positions = Vec::with_capacity(side);
    let mut col_hits = vec![0usize; side];
    for r in 0..side {
        let hits: Vec<usize> = (0..side)
            .filter(|&c| unfolded.get(r, c) > POSITIVE_TOL)
            .collect();
        if hits.len() != 1 {
            return Err(Error::Domain(format!(
                "row {r} of the unfolding has {} positive entries",
                hits.len()
            )));
        }
        col_hits[hits[0]] += 1;
        positions.push((r, hits[0]));
    }
    if let Some(c) = col_hits.iter().position(|&h| h != 1) {
        return Err(Error::Domain(format!(
            "column {c} of the unfolding has {} positive entries",
            col_hits[c]
        )));
    }
    Ok(GeneralizedPermutation { positions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_3_1_entries() {
        let k = CommutationTensor::new(3, 2).unwrap();
        assert_eq!(k.backing().dims(), &[2, 3, 3, 2]);
        let ones: Vec<Vec<usize>> = k
            .backing()
            .shape()
            .indices()
            .filter(|ix| k.backing().get(ix) == 1.0)
            .map(|ix| ix.iter().map(|i| i + 1).collect())
            .collect();
        let mut expected = vec![
            vec![1, 1, 1, 1],
            vec![2, 1, 1, 2],
            vec![1, 2, 2, 1],
            vec![2, 2, 2, 2],
            vec![1, 3, 3, 1],
            vec![2, 3, 3, 2],
        ];
        expected.sort();
        let mut got = ones;
        got.sort();
        assert_eq!(got, expected);
        let x = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]).unwrap();
        assert_eq!(k.transpose(&x).unwrap(), x.transpose());
    }

    #[test]
    fn small_ctensors() {
        assert_eq!(
            CommutationTensor::new(1, 1).unwrap().backing().values(),
            &[1.0]
        );
        let k = CommutationTensor::new(2, 2).unwrap();
        let count = k.backing().values().iter().filter(|&&v| v == 1.0).count();
        assert_eq!(count, 4);
        assert!(CommutationTensor::new(0, 1).is_err());
        let sym = Matrix::from_rows(&[[1.0, 7.0], [7.0, 2.0]]).unwrap();
        assert_eq!(k.transpose(&sym).unwrap(), sym);
        assert!(k.transpose(&Matrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn gct_construction() {
        let id = Gct::identity(2, 3).unwrap();
        assert_eq!(id.to_dense(), identity_2m(2, 3).unwrap());
        let scalar = Gct::new(vec![Matrix::from_rows(&[[3.0]]).unwrap()]).unwrap();
        assert_eq!(scalar.to_dense().values(), &[3.0]);
        assert!(Gct::new(vec![Matrix::identity(2), Matrix::identity(3)]).is_err());
        assert!(Gct::new(vec![]).is_err());
        assert!(Gct::new(vec![Matrix::zeros(2, 3)]).is_err());
    }

    #[test]
    fn gct_inverse_rejects_singular() {
        let g = Gct::new(vec![Matrix::identity(2), Matrix::zeros(2, 2)]).unwrap();
        assert!(matches!(g.inverse(), Err(Error::Singular { .. })));
        let id = Gct::identity(3, 2).unwrap();
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn a_times_m_inverse() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]).unwrap();
        let inv = Gct::power_of(&a, 2).unwrap().inverse().unwrap();
        let expected = Matrix::from_rows(&[[1.0, -1.0], [-1.0, 2.0]]).unwrap();
        for g in inv.generators() {
            assert!(g.approx_eq(&expected, 1e-14));
        }
    }

    #[test]
    fn powers() {
        let k = CommutationTensor::new(2, 2).unwrap().into_dense();
        assert_eq!(ctensor_power(1, 2).unwrap(), k);
        assert_eq!(ctensor_power(3, 2).unwrap(), k);
        let k2 = ctensor_power(2, 2).unwrap();
        for ix in k2.shape().indices() {
            let expected = indicator(ix[0] == ix[2] && ix[1] == ix[3]);
            assert_eq!(k2.get(&ix), expected);
        }
        assert_eq!(ctensor_power(5, 3).unwrap(), ctensor_power(3, 3).unwrap());
        assert!(ctensor_power(0, 2).is_err());
    }

    #[test]
    fn mode_perm_tensor_counts() {
        let tau = Permutation::cycle(3, &[1, 2, 3]).unwrap();
        let t = ModePermTensor::new(tau, 2).unwrap().to_dense();
        assert_eq!(t.values().iter().filter(|&&v| v == 1.0).count(), 8);
        let id = ModePermTensor::new(Permutation::identity(2), 3).unwrap();
        assert_eq!(id.to_dense(), identity_2m(2, 3).unwrap());
    }

    #[test]
    fn permute_modes_matrix_transpose() {
        let a = DenseTensor::from_matrix(&Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap());
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        let out = permute_modes(&a, &swap).unwrap().to_matrix().unwrap();
        assert_eq!(out, Matrix::from_rows(&[[1.0, 3.0], [2.0, 4.0]]).unwrap());
        assert_eq!(permute_modes(&a, &Permutation::identity(2)).unwrap(), a);
        let ragged = DenseTensor::zeros(Shape::new(vec![2, 3]).unwrap());
        assert!(permute_modes(&ragged, &swap).is_err());
        assert!(permute_modes(&a, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn complete_right_product_cases() {
        let x = DenseTensor::from_fn(Shape::cube(3, 2).unwrap(), |ix| {
            ix.iter().map(|&i| [1.0, 2.0][i]).product()
        });
        let swap = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let y = DenseTensor::from_fn(Shape::cube(3, 2).unwrap(), |ix| {
            ix.iter().map(|&i| [2.0, 1.0][i]).product()
        });
        assert_eq!(complete_right_product(&x, &swap).unwrap(), y);
        assert_eq!(complete_right_product(&x, &Matrix::identity(2)).unwrap(), x);
        assert!(complete_right_product(&x, &Matrix::identity(3)).is_err());
        assert!(complete_right_product(&x, &Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn pair_symmetry() {
        let k = CommutationTensor::new(3, 3).unwrap().into_dense();
        assert!(is_pair_symmetric(&k).unwrap());
        assert!(is_pair_symmetric(&identity_2m(3, 2).unwrap()).unwrap());
        let broken = k.with_entry(&[0, 1, 0, 0], 1.0);
        assert!(!is_pair_symmetric(&broken).unwrap());
        assert!(is_pair_symmetric(&DenseTensor::zeros(Shape::cube(3, 2).unwrap())).is_err());
        // sampled branch: m = 4
        assert!(is_pair_symmetric(&identity_2m(4, 2).unwrap()).unwrap());
    }

    #[test]
    fn balanced_permutation() {
        assert!(is_balanced_permutation(&identity_2m(2, 2).unwrap()).unwrap());
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        let kpi = Gct::from_permutation(&swap, 2).unwrap().to_dense();
        assert!(is_balanced_permutation(&kpi).unwrap());
        let ones = DenseTensor::new(Shape::cube(4, 2).unwrap(), vec![1.0; 16]).unwrap();
        assert!(!is_balanced_permutation(&ones).unwrap());
    }

    #[test]
    fn nonneg_inverse_cases() {
        let id = identity_2m(2, 2).unwrap();
        let w = check_nonneg_inverse(&id.scale(2.0), &id.scale(0.5)).unwrap();
        assert_eq!(w.positions, (0..4).map(|i| (i, i)).collect::<Vec<_>>());

        let bumped = id.with_entry(&[0, 0, 1, 0], 1.0);
        assert!(matches!(
            check_nonneg_inverse(&bumped, &id),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_nonneg_inverse(&id.scale(-1.0), &id),
            Err(Error::Domain(_))
        ));
    }
}

//! The commutation matrix `K_{p,q}`.
//!
//! `K_{p,q}` is the `pq × pq` permutation matrix with `K·vec(X) = vec(Xᵀ)` for
//! every `p × q` matrix `X`. Viewed as a `p × q` grid of `q × p` blocks, block
//! `(i, j)` holds a single 1 at position `(j, i)`. It is stored as the row
//! permutation and only materialized on request.

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::Matrix;
use crate::perm::Permutation;
use crate::vec_kron::kron;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationMatrix {
    p: usize,
    q: usize,
    /// Row `s` has its 1 in column `perm(s)` (0-based).
    perm: Permutation,
}

impl CommutationMatrix {
    /// Builds `K_{p,q}` from the block definition.
    pub fn new(p: usize, q: usize) -> Result<Self> {
        check_sizes(p, q)?;
        let mut images = vec![0; p * q];
        for i in 0..p {
            for j in 0..q {
                // block (i, j) starts at row i·q, column j·p; its 1 sits at (j, i) inside it
                images[i * q + j] = j * p + i;
            }
        }
        Ok(CommutationMatrix {
            p,
            q,
            perm: Permutation::from_images(images)?,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn size(&self) -> usize {
        self.p * self.q
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn to_dense(&self) -> Matrix {
        self.perm.matrix()
    }

    /// `K·x` in `O(pq)` by gathering through the permutation.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.size() {
            return Err(Error::dim(format!(
                "K_{{{},{}}} acts on length {}, got {}",
                self.p,
                self.q,
                self.size(),
                x.len()
            )));
        }
        Ok(self.perm.images().iter().map(|&t| x[t]).collect())
    }

    /// `K_{q,p}`, which is both the transpose and the inverse.
    pub fn transpose(&self) -> CommutationMatrix {
        CommutationMatrix {
            p: self.q,
            q: self.p,
            perm: self.perm.inverse(),
        }
    }

    /// Determinant, exactly `±1`, from the sign of the stored permutation.
    pub fn det(&self) -> i32 {
        self.perm.sign()
    }

    pub fn trace(&self) -> usize {
        self.perm.fixed_points()
    }

    /// `{"p":…,"q":…,"perm":[…]}` with 1-based images.
    pub fn to_json(&self) -> String {
        json::object(&[
            ("p", self.p.to_string()),
            ("q", self.q.to_string()),
            ("perm", json::int_array(&self.perm.to_one_based())),
        ])
    }
}

fn check_sizes(p: usize, q: usize) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::Argument(format!(
            "commutation matrix sizes must be positive, got ({p}, {q})"
        )));
    }
    Ok(())
}

/// `K_{p,q}` assembled as `Σ_{i,j} (e_{p,i} ⊗ e_{q,j})(e_{q,j} ⊗ e_{p,i})ᵀ`.
pub fn build_commutation_rank1(p: usize, q: usize) -> Result<Matrix> {
    check_sizes(p, q)?;
    let basis = |n: usize, i: usize| Matrix::from_fn(n, 1, |r, _| if r == i { 1.0 } else { 0.0 });
    let mut k = Matrix::zeros(p * q, p * q);
    for i in 0..p {
        for j in 0..q {
            let left = kron(&basis(p, i), &basis(q, j));
            let right = kron(&basis(q, j), &basis(p, i));
            k = k.add(&left.matmul(&right.transpose()))?;
        }
    }
    Ok(k)
}

/// Maps block coordinates to flat coordinates of `K_{p,q}`, all 1-based:
/// entry `(k, l)` of block `(i, j)` is entry `(s, t)` with `s = (i−1)q + k`,
/// `t = (j−1)p + l`.
pub fn block_to_flat(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    p: usize,
    q: usize,
) -> Result<(usize, usize)> {
    let in_range = |v: usize, hi: usize| (1..=hi).contains(&v);
    if !(in_range(i, p) && in_range(j, q) && in_range(k, q) && in_range(l, p)) {
        return Err(Error::Range(format!(
            "block index ({i},{j},{k},{l}) outside p={p}, q={q}"
        )));
    }
    Ok(((i - 1) * q + k, (j - 1) * p + l))
}

/// Exact inverse of [`block_to_flat`]: `i = ⌈s/q⌉`, `k = s − (i−1)q`,
/// `j = ⌈t/p⌉`, `l = t − (j−1)p`.
pub fn flat_to_block(
    s: usize,
    t: usize,
    p: usize,
    q: usize,
) -> Result<(usize, usize, usize, usize)> {
    let n = p * q;
    if p == 0 || q == 0 || !(1..=n).contains(&s) || !(1..=n).contains(&t) {
        return Err(Error::Range(format!(
            "flat index ({s},{t}) outside 1..={n}"
        )));
    }
    let i = s.div_ceil(q);
    let j = t.div_ceil(p);
    Ok((i, j, s - (i - 1) * q, t - (j - 1) * p))
}

/// `det(K_{p,q})` as the sign of its permutation.
pub fn det_commutation(p: usize, q: usize) -> Result<i32> {
    Ok(CommutationMatrix::new(p, q)?.det())
}

/// `Tr(K_{p,p})`.
pub fn trace_commutation(p: usize) -> Result<usize> {
    Ok(CommutationMatrix::new(p, p)?.trace())
}

/// Rebuilds `A ⊗ B` from `B ⊗ A` as `K_{p,q}·(B ⊗ A)·K_{q,p}` for `A: p×p`, `B: q×q`.
pub fn conjugate_kron(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::dim(format!(
            "conjugate_kron needs square factors, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let k = CommutationMatrix::new(a.rows(), b.rows())?;
    let ba = kron(b, a);
    // K_{p,q} M K_{q,p} picks M[perm(s), perm(t)]
    let perm = k.permutation();
    Ok(Matrix::from_fn(k.size(), k.size(), |s, t| {
        ba.get(perm.apply(s), perm.apply(t))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const K23: [[f64; 6]; 6] = [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ];

    #[test]
    fn k23_matches_explicit_matrix() {
        let k = CommutationMatrix::new(2, 3).unwrap();
        assert_eq!(k.to_dense(), Matrix::from_rows(&K23).unwrap());
        assert_eq!(
            build_commutation_rank1(2, 3).unwrap(),
            Matrix::from_rows(&K23).unwrap()
        );
    }

    #[test]
    fn degenerate_sizes_are_identity() {
        for p in 1..6 {
            assert_eq!(
                CommutationMatrix::new(p, 1).unwrap().to_dense(),
                Matrix::identity(p)
            );
            assert_eq!(
                CommutationMatrix::new(1, p).unwrap().to_dense(),
                Matrix::identity(p)
            );
            assert_eq!(build_commutation_rank1(1, p).unwrap(), Matrix::identity(p));
        }
        assert!(CommutationMatrix::new(0, 2).is_err());
        assert!(build_commutation_rank1(2, 0).is_err());
    }

    #[test]
    fn rank1_form_transpose() {
        let k32 = build_commutation_rank1(3, 2).unwrap();
        assert_eq!(
            k32,
            CommutationMatrix::new(2, 3).unwrap().to_dense().transpose()
        );
    }

    #[test]
    fn apply_examples() {
        let k = CommutationMatrix::new(2, 3).unwrap();
        // vec([[1,2,3],[4,5,6]]) → vec of the 3×2 transpose
        let out = k.apply(&[1.0, 4.0, 2.0, 5.0, 3.0, 6.0]).unwrap();
        assert_eq!(out, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let k22 = CommutationMatrix::new(2, 2).unwrap();
        assert_eq!(
            k22.apply(&[3.0, 4.0, 6.0, 8.0]).unwrap(),
            vec![3.0, 6.0, 4.0, 8.0]
        );
        assert!(k.apply(&[1.0; 5]).is_err());
    }

    #[test]
    fn index_maps() {
        assert_eq!(block_to_flat(1, 1, 1, 1, 2, 3).unwrap(), (1, 1));
        assert_eq!(block_to_flat(2, 3, 1, 2, 2, 3).unwrap(), (4, 6));
        assert_eq!(flat_to_block(1, 1, 2, 3).unwrap(), (1, 1, 1, 1));
        assert_eq!(flat_to_block(4, 6, 2, 3).unwrap(), (2, 3, 1, 2));
        assert!(block_to_flat(3, 1, 1, 1, 2, 3).is_err());
        assert!(block_to_flat(1, 1, 4, 1, 2, 3).is_err());
        assert!(flat_to_block(0, 1, 2, 3).is_err());
        assert!(flat_to_block(1, 7, 2, 3).is_err());
    }

    #[test]
    fn structural_constants() {
        assert_eq!(det_commutation(2, 2).unwrap(), -1);
        assert_eq!(det_commutation(4, 4).unwrap(), 1);
        // K_{2,3}: cycles (2 3 5 4) on 1-based rows, one 4-cycle → odd
        assert_eq!(det_commutation(2, 3).unwrap(), -1);
        assert_eq!(trace_commutation(1).unwrap(), 1);
        assert_eq!(trace_commutation(3).unwrap(), 3);
    }

    #[test]
    fn json_form() {
        let k = CommutationMatrix::new(3, 2).unwrap();
        assert_eq!(k.to_json(), r#"{"p":3,"q":2,"perm":[1,4,2,5,3,6]}"#);
    }

    #[test]
    fn conjugate_kron_rejects_non_square() {
        assert!(conjugate_kron(&Matrix::zeros(2, 3), &Matrix::identity(2)).is_err());
        let out = conjugate_kron(&Matrix::identity(2), &Matrix::identity(3)).unwrap();
        assert_eq!(out, Matrix::identity(6));
    }
}

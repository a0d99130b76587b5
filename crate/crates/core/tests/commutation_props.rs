mod common;

use commutant::commutation::{
    block_to_flat, build_commutation_rank1, conjugate_kron, det_commutation, flat_to_block,
    trace_commutation,
};
use commutant::vec_kron::{kron, kron_vec, trace_via_vec, unvec, vec, vec_sandwich, VecLayout};
use commutant::{CommutationMatrix, Matrix};
use proptest::prelude::*;

/// Column `c` of the unique `K` with `K·vec(X) = vec(Xᵀ)` is `vec(E_cᵀ)`, `E_c` the `c`-th basis matrix.
fn reconstruct_from_transpose(p: usize, q: usize) -> Matrix {
    let n = p * q;
    let mut k = Matrix::zeros(n, n);
    for c in 0..n {
        let mut basis = vec![0.0; n];
        basis[c] = 1.0;
        let e = unvec(&basis, p, q, VecLayout::ColumnMajor).unwrap();
        for (r, v) in vec(&e.transpose()).into_iter().enumerate() {
            k.set(r, c, v);
        }
    }
    k
}

/// `K(x ⊗ y) = y ⊗ x` on basis vectors `x ∈ R^q`, `y ∈ R^p` fixes `K` column by column.
fn reconstruct_from_swap(p: usize, q: usize) -> Matrix {
    let n = p * q;
    let mut k = Matrix::zeros(n, n);
    for i in 0..p {
        for j in 0..q {
            let y: Vec<f64> = (0..p).map(|r| f64::from(u8::from(r == i))).collect();
            let x: Vec<f64> = (0..q).map(|r| f64::from(u8::from(r == j))).collect();
            let col = kron_vec(&x, &y).iter().position(|&v| v == 1.0).unwrap();
            for (r, v) in kron_vec(&y, &x).into_iter().enumerate() {
                k.set(r, col, v);
            }
        }
    }
    k
}

#[test]
fn uniqueness_reconstruction_matches_builder() {
    for p in 1..=5 {
        for q in 1..=5 {
            let k = CommutationMatrix::new(p, q).unwrap().to_dense();
            assert_eq!(reconstruct_from_transpose(p, q), k, "({p},{q})");
            assert_eq!(reconstruct_from_swap(p, q), k, "({p},{q})");
            assert_eq!(build_commutation_rank1(p, q).unwrap(), k, "({p},{q})");
        }
    }
}

#[test]
fn determinant_matches_inversion_count_and_cofactors() {
    for p in 1..=4 {
        for q in 1..=3 {
            let k = CommutationMatrix::new(p, q).unwrap();
            let oracle = common::inversion_sign(k.permutation().images());
            assert_eq!(k.det(), oracle);
            if p * q <= 6 {
                assert_eq!(common::det(&k.to_dense()), f64::from(oracle));
            }
        }
    }
    for p in 1..=6 {
        let expected = if (p * (p - 1) / 2) % 2 == 0 { 1 } else { -1 };
        assert_eq!(det_commutation(p, p).unwrap(), expected);
    }
    assert_eq!(det_commutation(2, 3).unwrap(), -1);
}

#[test]
fn square_commutation_constants() {
    for p in 1..=8 {
        let k = CommutationMatrix::new(p, p).unwrap();
        let dense = k.to_dense();
        assert_eq!(trace_commutation(p).unwrap(), p);
        assert_eq!(dense.trace(), p as f64);
        assert_eq!(dense.matmul(&dense), Matrix::identity(p * p));
        assert_eq!(dense.transpose(), dense);
    }
}

#[test]
fn block_maps_cover_every_entry() {
    for (p, q) in [(2, 3), (3, 2), (1, 4), (3, 3)] {
        let k = CommutationMatrix::new(p, q).unwrap().to_dense();
        let mut seen = vec![false; p * q * p * q];
        for i in 1..=p {
            for j in 1..=q {
                for kk in 1..=q {
                    for l in 1..=p {
                        let (s, t) = block_to_flat(i, j, kk, l, p, q).unwrap();
                        assert_eq!(flat_to_block(s, t, p, q).unwrap(), (i, j, kk, l));
                        seen[(s - 1) + (t - 1) * p * q] = true;
                        // block (i, j) carries its single 1 at (j, i)
                        let one = kk == j && l == i;
                        assert_eq!(k.get(s - 1, t - 1), if one { 1.0 } else { 0.0 });
                    }
                }
            }
        }
        assert!(seen.into_iter().all(|b| b));
    }
    assert!(block_to_flat(0, 1, 1, 1, 2, 3).is_err());
    assert!(flat_to_block(7, 1, 2, 3).is_err());
}

#[test]
fn kron_conjugation_orientation() {
    let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
    let b = Matrix::from_rows(&[[5.0, 6.0, 7.0], [8.0, 9.0, 10.0], [11.0, 12.0, 13.0]]).unwrap();
    let kpq = CommutationMatrix::new(2, 3).unwrap().to_dense();
    let kqp = CommutationMatrix::new(3, 2).unwrap().to_dense();
    let ab = kron(&a, &b);
    let ba = kron(&b, &a);
    assert_eq!(kpq.matmul(&ba).matmul(&kqp), ab);
    assert_ne!(kpq.matmul(&ba).matmul(&kpq), ab);
    assert_eq!(conjugate_kron(&a, &b).unwrap(), ab);
}

#[test]
fn trace_via_vec_uses_transpose() {
    let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
    let b = Matrix::from_rows(&[[5.0, 6.0], [7.0, 8.0]]).unwrap();
    assert_eq!(a.matmul(&b).trace(), 69.0);
    assert_eq!(trace_via_vec(&a, &b).unwrap(), 69.0);
    let naive: f64 = vec(&b).iter().zip(vec(&a)).map(|(x, y)| x * y).sum();
    assert_eq!(naive, 70.0);
}

fn size() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 1usize..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vec_identity_exact((p, q) in size(), seed in any::<u64>()) {
        let mut rng = commutant::rng::stream(seed, 0, 0);
        let x = commutant::rng::matrix(&mut rng, p, q);
        let k = CommutationMatrix::new(p, q).unwrap();
        prop_assert_eq!(k.apply(&vec(&x)).unwrap(), vec(&x.transpose()));
        prop_assert_eq!(k.to_dense().matvec(&vec(&x)).unwrap(), vec(&x.transpose()));
    }

    #[test]
    fn swap_law_exact((p, q) in size(), seed in any::<u64>()) {
        let mut rng = commutant::rng::stream(seed, 1, 0);
        let x = commutant::rng::vector(&mut rng, q);
        let y = commutant::rng::vector(&mut rng, p);
        let k = CommutationMatrix::new(p, q).unwrap();
        prop_assert_eq!(k.apply(&kron_vec(&x, &y)).unwrap(), kron_vec(&y, &x));
    }

    #[test]
    fn transpose_is_inverse((p, q) in size()) {
        let k = CommutationMatrix::new(p, q).unwrap();
        let kt = k.transpose();
        prop_assert_eq!((kt.p(), kt.q()), (q, p));
        prop_assert_eq!(kt.to_dense(), k.to_dense().transpose());
        prop_assert_eq!(kt.to_dense().matmul(&k.to_dense()), Matrix::identity(p * q));
    }

    #[test]
    fn conjugation_recovers_kron(a in common::matrix(3, 3), b in common::matrix(4, 4)) {
        prop_assert!(conjugate_kron(&a, &b).unwrap().approx_eq(&kron(&a, &b), 1e-12));
    }

    #[test]
    fn sandwich_matches_product(
        a in common::matrix(2, 3),
        b in common::matrix(3, 4),
        c in common::matrix(4, 2),
    ) {
        let direct = vec(&a.matmul(&b).matmul(&c));
        let via = vec_sandwich(&a, &b, &c).unwrap();
        for (x, y) in direct.iter().zip(&via) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn trace_via_vec_matches_trace(a in common::matrix(3, 2), b in common::matrix(2, 3)) {
        prop_assert!((trace_via_vec(&a, &b).unwrap() - a.matmul(&b).trace()).abs() <= 1e-12);
    }

    #[test]
    fn unvec_inverts_vec(x in common::matrix(3, 4)) {
        prop_assert_eq!(unvec(&vec(&x), 3, 4, VecLayout::ColumnMajor).unwrap(), x.clone());
        let rowwise: Vec<f64> = x.to_rows().concat();
        prop_assert_eq!(unvec(&rowwise, 3, 4, VecLayout::RowMajor).unwrap(), x);
    }
}

//! Seeded random streams and random test objects.
//!
//! Every stream is a `ChaCha8Rng` keyed by the 64-bit seed. Independent streams
//! are split off by ChaCha stream id: the high 32 bits carry the suite index and
//! the low 32 bits the trial index, so `(seed, suite, trial)` names one
//! reproducible stream regardless of execution order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use crate::tensor::{DenseTensor, Shape};

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, suite: u32, trial: u32) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite as u64) << 32) | trial as u64);
    rng
}

/// Uniform entries in `[-1, 1)`.
pub fn vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Uniform entries in `[-1, 1)`, redrawn until the Euclidean norm is at least 0.1.
pub fn nonzero_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v = vector(rng, n);
        if v.iter().map(|x| x * x).sum::<f64>() >= 0.01 {
            return v;
        }
    }
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_col_major(rows, cols, vector(rng, rows * cols)).expect("sizes agree")
}

/// Random square matrix with `|det| ≥ 0.05`, comfortably away from singular.
pub fn invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = matrix(rng, n, n);
        if m.det().map(|d| d.abs() >= 0.05).unwrap_or(false) {
            return m;
        }
    }
}

pub fn tensor<R: Rng>(rng: &mut R, dims: &[usize]) -> DenseTensor {
    let shape = Shape::new(dims.to_vec()).expect("positive extents");
    let values = vector(rng, shape.len());
    DenseTensor::new(shape, values).expect("sizes agree")
}

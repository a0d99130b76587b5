//! Commutation matrices, commutation tensors and linear rank preservers.
//!
//! Dense tensors are stored little-endian: mode 1 varies fastest, so an order-2
//! tensor's values are the column-major vectorization of the matrix.

pub mod commutation;
pub mod cp;
pub mod ctensor;
pub mod error;
pub mod json;
pub mod matrix;
pub mod perm;
pub mod preserver;
pub mod rng;
pub mod tensor;
pub mod vec_kron;

pub use commutation::CommutationMatrix;
pub use cp::{CpForm, SymCpForm};
pub use ctensor::{CommutationTensor, Gct, ModePermTensor};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use perm::Permutation;
pub use preserver::{MatrixPreserver, RankPreserver, SymPreserver};
pub use tensor::{DenseTensor, Shape, TensorRecord};

//! Permutations of `0..k`.
//!
//! Images are stored 0-based. The serialized form (JSON, CLI arguments) is
//! 1-based, matching the usual cycle notation; use [`Permutation::from_one_based`]
//! and [`Permutation::to_one_based`] at those boundaries.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A bijection on `0..k`; `images[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k).collect(),
        }
    }

    /// Builds a permutation from 0-based images, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &im in &images {
            if im >= k || seen[im] {
                return Err(Error::Argument(format!(
                    "{images:?} is not a permutation of 0..{k}"
                )));
            }
            seen[im] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images, e.g. `[2, 3, 1]` for the cycle (1 2 3).
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Argument(format!(
                "{images:?} is not a 1-based permutation"
            )));
        }
        Self::from_images(images.iter().map(|&i| i - 1).collect())
    }

    /// Builds a permutation of `0..k` from a single 1-based cycle, e.g. `&[1, 2, 3]`.
    pub fn cycle(k: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        for (pos, &c) in cycle.iter().enumerate() {
            let next = cycle[(pos + 1) % cycle.len()];
            if c == 0 || c > k || next == 0 || next > k {
                return Err(Error::Argument(format!("cycle {cycle:?} outside 1..={k}")));
            }
            images[c - 1] = next - 1;
        }
        Self::from_images(images)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im] = i;
        }
        Permutation { images: inv }
    }

    /// `self.then(other)` applies `self` first, then `other`: `i ↦ other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different sizes"
        );
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    /// Number of pairs `i < j` with `images[i] > images[j]`.
    pub fn inversions(&self) -> usize {
        let n = self.images.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `(-1)^inversions`.
    pub fn sign(&self) -> i32 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &im)| *i == im)
            .count()
    }

    /// Permutation matrix with row `i` carrying its 1 in column `images[i]`.
    pub fn matrix(&self) -> Matrix {
        let k = self.len();
        let mut m = Matrix::zeros(k, k);
        for (i, &im) in self.images.iter().enumerate() {
            m.set(i, im, 1.0);
        }
        m
    }

    /// All `k!` permutations of `0..k` in lexicographic order of their images.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..k).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Permutations of `{0, .., n-1}` in one-line notation.

use crate::{Error, Result};

/// A permutation `ρ` stored as its image list: `ρ(i) = self[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {i} out of range for length {n}"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("image {i} repeated")));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// The permutation with lexicographic rank `rank` among all `n!`
    /// permutations of length `n` (factorial number system).
    ///
    /// Panics if `rank >= n!`.
    pub fn from_lex_rank(n: usize, mut rank: u64) -> Self {
        assert!(rank < factorial(n), "rank {rank} out of range for n = {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        let mut images = Vec::with_capacity(n);
        for k in (0..n).rev() {
            let f = factorial(k);
            let idx = (rank / f) as usize;
            rank %= f;
            images.push(pool.remove(idx));
        }
        Self(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..factorial(n)).map(move |r| Permutation::from_lex_rank(n, r))
    }
}

/// `n!` as `u64`. Panics on overflow (`n > 20`).
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .expect("factorial overflows u64")
}

/// `n!` as `f64`, valid well beyond the `u64` range.
pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

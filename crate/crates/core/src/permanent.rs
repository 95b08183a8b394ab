// SPDX-License-Identifier: Apache-2.0

//! Exact permanents of square complex matrices.
//!
//! [`permanent_ryser`] is the production kernel: Ryser's inclusion–exclusion
//! formula
//!
//! ```text
//! perm A = (-1)^n Σ_{S ⊆ cols} (-1)^{|S|} Π_i Σ_{j ∈ S} A[i][j]
//! ```
//!
//! visiting the subsets in Gray-code order so each step adds or removes a
//! single column from the running row sums, for `O(2ⁿ n)` work.
//! [`permanent_naive`] expands the definition directly and serves as its
//! oracle.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::{CMatrix, Error, Result};

pub const NAIVE_MAX_N: usize = 12;
pub const RYSER_MAX_N: usize = 30;
/// Dimension from which the subset sum is accumulated with compensation.
pub const COMPENSATED_FROM_N: usize = 20;
/// A result smaller than this times `(max row-sum magnitude)ⁿ` is flagged.
pub const CONDITION_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Naive,
    RyserGray,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermanentResult {
    pub value: Complex64,
    pub algorithm: Algorithm,
    pub n: usize,
    /// Set when heavy cancellation makes the relative accuracy doubtful.
    pub ill_conditioned: bool,
}

fn check_square(a: &CMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    Ok(a.nrows())
}

fn finish(a: &CMatrix, value: Complex64, algorithm: Algorithm) -> PermanentResult {
    let n = a.nrows();
    let max_row = a
        .row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let scale = max_row.powi(n as i32);
    let ill_conditioned = n > 0 && scale > 0.0 && value.norm() < CONDITION_THRESHOLD * scale;
    if ill_conditioned {
        log::warn!(
            "permanent of {n}x{n} matrix is ill-conditioned: |perm| = {:.3e}, scale = {:.3e}",
            value.norm(),
            scale
        );
    }
    PermanentResult { value, algorithm, n, ill_conditioned }
}

/// `Σ_σ Π_i A[i][σ(i)]` by depth-first expansion. Refuses `n > 12`.
pub fn permanent_naive(a: &CMatrix) -> Result<PermanentResult> {
    let n = check_square(a)?;
    if n > NAIVE_MAX_N {
        return Err(Error::Infeasible {
            what: format!("naive permanent of a {n}x{n} matrix"),
            cost: crate::permutation::factorial_f64(n) * n as f64,
            limit: format!("n <= {NAIVE_MAX_N}"),
        });
    }
    fn expand(a: &CMatrix, row: usize, used: u32, acc: Complex64) -> Complex64 {
        let n = a.nrows();
        if row == n {
            return acc;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for col in 0..n {
            if used & (1 << col) == 0 {
                total += expand(a, row + 1, used | (1 << col), acc * a[(row, col)]);
            }
        }
        total
    }
    let value = expand(a, 0, 0, Complex64::new(1.0, 0.0));
    Ok(finish(a, value, Algorithm::Naive))
}

fn ryser_guard(n: usize) -> Result<()> {
    if n > RYSER_MAX_N {
        return Err(Error::Infeasible {
            what: format!("Ryser permanent of a {n}x{n} matrix"),
            cost: 2f64.powi(n as i32) * n as f64,
            limit: format!("n <= {RYSER_MAX_N}"),
        });
    }
    Ok(())
}

/// Neumaier-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: Complex64,
    comp: Complex64,
}

impl Compensated {
    #[inline]
    fn add(&mut self, x: Complex64) {
        let (re, cr) = two_sum(self.sum.re, x.re);
        let (im, ci) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.comp += Complex64::new(cr, ci);
    }

    fn total(self) -> Complex64 {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, err)
}

#[inline]
fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Signed subset sum `Σ (-1)^{|S|} Π_i rowsum_i(S)` over the Gray-code steps
/// `k ∈ [start, end)`, `start ≥ 1`. Row sums for the first subset are built
/// directly; every further step moves one column in or out.
fn ryser_block(cols: &[Vec<Complex64>], start: u64, end: u64, compensated: bool) -> Complex64 {
    let n = cols.len();
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let first = gray(start);
    for (j, col) in cols.iter().enumerate() {
        if first & (1 << j) != 0 {
            for (r, &x) in row_sums.iter_mut().zip(col) {
                *r += x;
            }
        }
    }
    let term = |row_sums: &[Complex64], k: u64| {
        let prod: Complex64 = row_sums.iter().product();
        // |S_k| ≡ k (mod 2) along the Gray sequence
        if k & 1 == 1 { -prod } else { prod }
    };

    let mut acc = Compensated::default();
    let mut plain = Complex64::new(0.0, 0.0);
    let first_term = term(&row_sums, start);
    if compensated {
        acc.add(first_term);
    } else {
        plain += first_term;
    }
    for k in start + 1..end {
        let j = k.trailing_zeros() as usize;
        let col = &cols[j];
        if gray(k) & (1 << j) != 0 {
            for (r, &x) in row_sums.iter_mut().zip(col) {
                *r += x;
            }
        } else {
            for (r, &x) in row_sums.iter_mut().zip(col) {
                *r -= x;
            }
        }
        let t = term(&row_sums, k);
        if compensated {
            acc.add(t);
        } else {
            plain += t;
        }
    }
    if compensated { acc.total() } else { plain }
}

fn columns(a: &CMatrix) -> Vec<Vec<Complex64>> {
    a.column_iter().map(|c| c.iter().copied().collect()).collect()
}

fn ryser_sign(n: usize, sum: Complex64) -> Complex64 {
    if n % 2 == 1 { -sum } else { sum }
}

/// Ryser/Gray-code permanent on the calling thread. Refuses `n > 30`.
pub fn permanent_ryser(a: &CMatrix) -> Result<PermanentResult> {
    let n = check_square(a)?;
    ryser_guard(n)?;
    if n == 0 {
        return Ok(finish(a, Complex64::new(1.0, 0.0), Algorithm::RyserGray));
    }
    let cols = columns(a);
    let sum = ryser_block(&cols, 1, 1u64 << n, n >= COMPENSATED_FROM_N);
    Ok(finish(a, ryser_sign(n, sum), Algorithm::RyserGray))
}

/// Ryser/Gray-code permanent with the `2ⁿ - 1` non-empty subsets split into
/// `blocks` contiguous Gray-code ranges evaluated in parallel. Block sums are
/// added in block order, so the result depends on `blocks` but not on
/// scheduling.
pub fn permanent_ryser_parallel(a: &CMatrix, blocks: usize) -> Result<PermanentResult> {
    let n = check_square(a)?;
    ryser_guard(n)?;
    if n == 0 {
        return Ok(finish(a, Complex64::new(1.0, 0.0), Algorithm::RyserGray));
    }
    let total = (1u64 << n) - 1;
    let blocks = (blocks.max(1) as u64).min(total);
    let cols = columns(a);
    let compensated = n >= COMPENSATED_FROM_N;
    let bounds: Vec<(u64, u64)> = (0..blocks)
        .map(|b| (1 + total * b / blocks, 1 + total * (b + 1) / blocks))
        .collect();
    let partials: Vec<Complex64> = bounds
        .par_iter()
        .map(|&(s, e)| ryser_block(&cols, s, e, compensated))
        .collect();
    let sum = if compensated {
        let mut acc = Compensated::default();
        partials.iter().for_each(|&p| acc.add(p));
        acc.total()
    } else {
        partials.iter().sum()
    };
    Ok(finish(a, ryser_sign(n, sum), Algorithm::RyserGray))
}

/// Permanent value by the fastest exact kernel; used by the probability
/// module.
pub(crate) fn perm(a: &CMatrix) -> Result<Complex64> {
    Ok(permanent_ryser(a)?.value)
}

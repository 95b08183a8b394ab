// SPDX-License-Identifier: Apache-2.0

//! Independent ground truth from first-quantized Fock-space evolution.
//!
//! The Gram matrix is factorized as `G = C C†`, so photon `s` can be given an
//! explicit internal state `c_s` (row `s` of `conj(C)`) in an `r`-dimensional
//! internal space with `⟨c_s, c_s'⟩ = G[s][s']`. Each input creation operator
//! then evolves to `Σ_{d,k} U[d][s] c_s[k] a†_{d,k}`; expanding the product
//! over photons as a polynomial in the commuting `a†_{d,k}` and applying it
//! to vacuum gives the output state. A monomial with coefficient `α` and
//! exponents `n_{d,k}` has probability `|α|² Π n_{d,k}!`, and the detectors,
//! blind to the internal modes, see the marginal over `k`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{enumerate_samples, DistributionEntry, OutputDistribution};
use crate::permutation::factorial_f64;
use crate::spectra::GramMatrix;
use crate::unitary::validate_inputs;
use crate::{CMatrix, Error, InterferometerMatrix, Result};

pub const ORACLE_MAX_N: usize = 4;
pub const ORACLE_MAX_M: usize = 6;
/// Eigenvalues of `G` at or below this are treated as zero.
const RANK_CUTOFF: f64 = 1e-13;

/// Internal-state vectors `c_s` as the columns of an `r × N` matrix.
pub fn internal_states(gram: &GramMatrix) -> CMatrix {
    let eig = gram.entries().clone().symmetric_eigen();
    let n = gram.dim();
    let kept: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > RANK_CUTOFF).collect();
    // c_s[k] = conj(V[s][k]) √λ_k
    CMatrix::from_fn(kept.len(), n, |row, s| {
        let k = kept[row];
        eig.eigenvectors[(s, k)].conj() * eig.eigenvalues[k].max(0.0).sqrt()
    })
}

pub fn fock_oracle(
    u: &InterferometerMatrix,
    input_ports: &[usize],
    gram: &GramMatrix,
) -> Result<OutputDistribution> {
    let m = u.dim();
    let n = input_ports.len();
    validate_inputs(m, input_ports)?;
    if gram.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: gram.dim() });
    }
    let states = internal_states(gram);
    let r = states.nrows();
    if n > ORACLE_MAX_N || m > ORACLE_MAX_M {
        return Err(Error::Infeasible {
            what: format!("Fock oracle for {n} photons in {m} ports"),
            cost: ((m * r.max(1)) as f64).powi(n as i32),
            limit: format!("N <= {ORACLE_MAX_N}, M <= {ORACLE_MAX_M}"),
        });
    }

    let modes = m * r;
    let mut state: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
    state.insert(vec![0; modes], Complex64::new(1.0, 0.0));
    for (s, &port) in input_ports.iter().enumerate() {
        let mut next = BTreeMap::new();
        for (occ, amp) in &state {
            for d in 0..m {
                for k in 0..r {
                    let coef = u.get(d, port) * states[(k, s)];
                    let mut occ2 = occ.clone();
                    occ2[d * r + k] += 1;
                    *next.entry(occ2).or_insert(Complex64::new(0.0, 0.0)) += amp * coef;
                }
            }
        }
        state = next;
    }

    let mut marginal: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (occ, amp) in &state {
        let weight: f64 = occ.iter().map(|&c| factorial_f64(c as usize)).product();
        let external: Vec<usize> = (0..m)
            .map(|d| occ[d * r..(d + 1) * r].iter().map(|&c| c as usize).sum())
            .collect();
        *marginal.entry(external).or_insert(0.0) += amp.norm_sqr() * weight;
    }

    let entries = enumerate_samples(m, n)
        .into_iter()
        .map(|occupation| {
            let probability = marginal.get(&occupation).copied().unwrap_or(0.0);
            DistributionEntry { occupation, probability }
        })
        .collect();
    OutputDistribution::new(m, n, entries)
}

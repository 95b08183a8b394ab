// SPDX-License-Identifier: Apache-2.0

//! Detection probabilities of a single output sample.
//!
//! The general path evaluates `Re Σ_ρ f_ρ perm A_ρ` over all `N!`
//! permutations; three fast paths cover Gram matrices of limiting form. A
//! sample with `n_d` photons in output port `d` has its rate divided by
//! `Π_d n_d!` so that probabilities over all output multisets sum to one.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::distribution::bounded_compositions;
use crate::permanent::perm;
use crate::permutation::{factorial, factorial_f64, Permutation};
use crate::spectra::{indistinguishability_weight, GramMatrix};
use crate::unitary::{interference_matrix, occupation_to_rows, select, submatrix};
use crate::{CMatrix, Error, InterferometerMatrix, PortConfiguration, Result};

/// Photon-number limit of the general permutation sum.
pub const GENERAL_MAX_N: usize = 10;
/// Tolerance for recognising identity, all-ones and block Gram matrices.
pub const LIMITING_FORM_TOL: f64 = 1e-12;
/// Permutation ranks per reduction chunk; fixed so the summation order does
/// not depend on the worker count.
const RANK_CHUNK: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluationPath {
    General,
    FullyDistinguishable,
    FullyIndistinguishable,
    MixedGroups,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionProbability {
    /// `raw_rate / Π_d n_d!`.
    pub value: f64,
    /// Real part of the permutation-weighted permanent sum.
    pub raw_rate: f64,
    /// Magnitude of the imaginary part left in the sum.
    pub imaginary_residual: f64,
    pub path: EvaluationPath,
}

impl DetectionProbability {
    fn new(raw: Complex64, cfg: &PortConfiguration, path: EvaluationPath) -> Self {
        let imaginary_residual = raw.im.abs();
        if imaginary_residual >= 1e-9 * raw.re.abs().max(1.0) {
            log::warn!("imaginary residual {imaginary_residual:.3e} on a detection rate of {:.3e}", raw.re);
        }
        Self {
            value: raw.re / cfg.collision_factor(),
            raw_rate: raw.re,
            imaginary_residual,
            path,
        }
    }
}

fn check_gram_dim(cfg: &PortConfiguration, gram: &GramMatrix) -> Result<()> {
    if gram.dim() != cfg.photons() {
        return Err(Error::DimensionMismatch { expected: cfg.photons(), found: gram.dim() });
    }
    Ok(())
}

fn general_guard(n: usize) -> Result<()> {
    if n > GENERAL_MAX_N {
        return Err(Error::Infeasible {
            what: format!("general permutation sum for {n} photons"),
            cost: factorial_f64(n) * 2f64.powi(n as i32) * n as f64,
            limit: format!("N <= {GENERAL_MAX_N} (use a limiting-case Gram matrix)"),
        });
    }
    Ok(())
}

/// Sums `term(rank)` over all `N!` permutation ranks in parallel chunks,
/// reducing chunk results in rank order.
fn reduce_over_permutations<F>(n: usize, term: F) -> Result<Complex64>
where
    F: Fn(&Permutation) -> Result<Complex64> + Sync,
{
    let total = factorial(n);
    let chunks = total.div_ceil(RANK_CHUNK);
    let partials: Vec<Result<Complex64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Complex64::new(0.0, 0.0);
            for rank in c * RANK_CHUNK..((c + 1) * RANK_CHUNK).min(total) {
                acc += term(&Permutation::from_lex_rank(n, rank))?;
            }
            Ok(acc)
        })
        .collect();
    partials.into_iter().sum()
}

/// `Re Σ_ρ f_ρ perm A_ρ`, normalized by `Π_d n_d!`.
///
/// Only one of each pair `(ρ, ρ⁻¹)` is evaluated, since
/// `f_{ρ⁻¹} perm A_{ρ⁻¹} = conj(f_ρ perm A_ρ)`: the pair contributes
/// `2 Re(f_ρ perm A_ρ)`. The imaginary residual therefore collects only the
/// self-inverse permutations, whose terms are real analytically; see
/// [`probability_general_unpaired`] for the full unpaired residual.
pub fn probability_general(
    u: &InterferometerMatrix,
    cfg: &PortConfiguration,
    gram: &GramMatrix,
) -> Result<DetectionProbability> {
    check_gram_dim(cfg, gram)?;
    let n = cfg.photons();
    general_guard(n)?;
    let u_sub = submatrix(u, cfg)?;
    let raw = reduce_over_permutations(n, |rho| {
        let inv = rho.inverse();
        if *rho > inv {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let f = indistinguishability_weight(gram, rho)?;
        if f == Complex64::new(0.0, 0.0) {
            return Ok(f);
        }
        let t = f * perm(interference_matrix(&u_sub, rho)?.entries())?;
        Ok(if *rho == inv { t } else { Complex64::new(2.0 * t.re, 0.0) })
    })?;
    Ok(DetectionProbability::new(raw, cfg, EvaluationPath::General))
}

/// [`probability_general`] without the `(ρ, ρ⁻¹)` pairing: every one of
/// the `N!` terms is evaluated and the imaginary residual is that of the full
/// sum.
pub fn probability_general_unpaired(
    u: &InterferometerMatrix,
    cfg: &PortConfiguration,
    gram: &GramMatrix,
) -> Result<DetectionProbability> {
    check_gram_dim(cfg, gram)?;
    let n = cfg.photons();
    general_guard(n)?;
    let u_sub = submatrix(u, cfg)?;
    let raw = reduce_over_permutations(n, |rho| {
        let f = indistinguishability_weight(gram, rho)?;
        if f == Complex64::new(0.0, 0.0) {
            return Ok(f);
        }
        Ok(f * perm(interference_matrix(&u_sub, rho)?.entries())?)
    })?;
    Ok(DetectionProbability::new(raw, cfg, EvaluationPath::General))
}

fn abs_sq(m: &CMatrix) -> CMatrix {
    m.map(|z| Complex64::new(z.norm_sqr(), 0.0))
}

/// Fully distinguishable photons: `perm |U^(D,S)|²` (entrywise modulus
/// squared).
pub fn probability_distinguishable(
    u: &InterferometerMatrix,
    cfg: &PortConfiguration,
) -> Result<DetectionProbability> {
    let u_sub = submatrix(u, cfg)?;
    let raw = perm(&abs_sq(&u_sub))?;
    Ok(DetectionProbability::new(raw, cfg, EvaluationPath::FullyDistinguishable))
}

/// Fully indistinguishable photons: `|perm U^(D,S)|²`.
pub fn probability_identical(
    u: &InterferometerMatrix,
    cfg: &PortConfiguration,
) -> Result<DetectionProbability> {
    let u_sub = submatrix(u, cfg)?;
    let raw = perm(&u_sub)?.norm_sqr();
    Ok(DetectionProbability::new(
        Complex64::new(raw, 0.0),
        cfg,
        EvaluationPath::FullyIndistinguishable,
    ))
}

/// Photons injected at the ports in `group` are mutually indistinguishable;
/// all others are distinguishable from every photon.
///
/// Sums `perm |U^(D∖Θ, S∖Φ)|² · |perm U^(Θ, Φ)|²` over the distinct
/// sub-multisets `Θ ⊆ D` of size `|Φ|`. A sub-multiset taking `θ_d` of the
/// `n_d` photons in port `d` stands for `Π_d C(n_d, θ_d)` choices of rows of
/// `U^(D,S)` and is weighted accordingly.
pub fn probability_mixed_groups(
    u: &InterferometerMatrix,
    cfg: &PortConfiguration,
    group: &[usize],
) -> Result<DetectionProbability> {
    if cfg.ports() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: cfg.ports() });
    }
    let mut in_group = vec![false; cfg.ports()];
    for &p in group {
        if !cfg.input_ports().contains(&p) {
            return Err(Error::InvalidConfiguration(format!(
                "indistinguishable port {p} is not an occupied input port"
            )));
        }
        if std::mem::replace(&mut in_group[p], true) {
            return Err(Error::InvalidConfiguration(format!("port {p} listed twice in group")));
        }
    }
    let phi: Vec<usize> = cfg.input_ports().iter().copied().filter(|&p| in_group[p]).collect();
    let rest: Vec<usize> = cfg.input_ports().iter().copied().filter(|&p| !in_group[p]).collect();
    let occupation = cfg.output_sample();
    let mut raw = 0.0;
    for theta in bounded_compositions(occupation, phi.len()) {
        let multiplicity: f64 = occupation
            .iter()
            .zip(&theta)
            .map(|(&n, &k)| binomial(n, k))
            .product();
        let remaining: Vec<usize> = occupation.iter().zip(&theta).map(|(&n, &k)| n - k).collect();
        let coherent = perm(&select(u.entries(), &occupation_to_rows(&theta), &phi))?.norm_sqr();
        if coherent == 0.0 {
            continue;
        }
        let incoherent = perm(&abs_sq(&select(u.entries(), &occupation_to_rows(&remaining), &rest)))?.re;
        raw += multiplicity * coherent * incoherent;
    }
    Ok(DetectionProbability::new(Complex64::new(raw, 0.0), cfg, EvaluationPath::MixedGroups))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Detection probability with the cheapest exact path for `gram`: identity,
/// all-ones and block Gram matrices go to their limiting-case evaluators,
/// anything else to the general permutation sum.
pub fn probability(
    u: &InterferometerMatrix,
    cfg: &PortConfiguration,
    gram: &GramMatrix,
) -> Result<DetectionProbability> {
    check_gram_dim(cfg, gram)?;
    let n = cfg.photons();
    match gram.indistinguishable_group(LIMITING_FORM_TOL) {
        Some(group) if group.is_empty() => probability_distinguishable(u, cfg),
        Some(group) if group.len() == n => probability_identical(u, cfg),
        Some(group) => {
            let ports: Vec<usize> = group.iter().map(|&i| cfg.input_ports()[i]).collect();
            probability_mixed_groups(u, cfg, &ports)
        }
        None => probability_general(u, cfg, gram),
    }
}

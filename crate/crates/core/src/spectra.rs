// SPDX-License-Identifier: Apache-2.0

//! Single-photon spectral amplitudes and their pairwise overlaps.
//!
//! A photon entering port `s` carries a polarization-vector-valued spectral
//! amplitude `ξ_s(ω)`. For a Gaussian pulse
//!
//! ```text
//! ξ_s(ω) = (2π Δω²)^{-1/4} exp(-(ω - ω₀)² / (4Δω²) + i ω t₀) · p
//! ```
//!
//! with `p` a unit Jones vector. The overlap `g(a, b) = ∫ dω ξ_a(ω)† ξ_b(ω)`
//! is conjugate-linear in its first argument, which makes the Gram matrix of a
//! photon set Hermitian positive semidefinite with unit diagonal.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::permutation::Permutation;
use crate::quadrature;
use crate::{CMatrix, Error, Result};

/// Tolerance on the Euclidean norm of a Jones vector.
pub const POLARIZATION_NORM_TOL: f64 = 1e-12;
/// Absolute tolerance of the quadrature overlap.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Half-width of the quadrature window, in bandwidths.
pub const QUADRATURE_HALF_WIDTH: f64 = 10.0;

pub const GRAM_HERMITIAN_TOL: f64 = 1e-10;
pub const GRAM_DIAGONAL_TOL: f64 = 1e-10;
pub const GRAM_MODULUS_TOL: f64 = 1e-10;
pub const GRAM_PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Gaussian envelope of width `Δω` centred at `ω₀`, emitted at `t₀`.
    GaussianPulse,
    /// Monochromatic limit `Δω → 0` of [`SpectrumKind::GaussianPulse`].
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralAmplitude {
    pub kind: SpectrumKind,
    pub central_frequency: f64,
    /// `Δω`; zero for [`SpectrumKind::Delta`].
    pub bandwidth: f64,
    pub emission_time: f64,
    pub polarization: [Complex64; 2],
}

impl SpectralAmplitude {
    pub fn gaussian(
        central_frequency: f64,
        bandwidth: f64,
        emission_time: f64,
        polarization: [Complex64; 2],
    ) -> Result<Self> {
        let s = Self {
            kind: SpectrumKind::GaussianPulse,
            central_frequency,
            bandwidth,
            emission_time,
            polarization,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn delta(
        central_frequency: f64,
        emission_time: f64,
        polarization: [Complex64; 2],
    ) -> Result<Self> {
        let s = Self {
            kind: SpectrumKind::Delta,
            central_frequency,
            bandwidth: 0.0,
            emission_time,
            polarization,
        };
        s.validate()?;
        Ok(s)
    }

    /// Horizontal polarization `(1, 0)`.
    pub fn horizontal() -> [Complex64; 2] {
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    }

    /// Vertical polarization `(0, 1)`.
    pub fn vertical() -> [Complex64; 2] {
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
    }

    pub fn with_emission_time(mut self, t0: f64) -> Self {
        self.emission_time = t0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self
            .polarization
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if !((norm - 1.0).abs() <= POLARIZATION_NORM_TOL) {
            return Err(Error::InvalidSpectrum(format!(
                "polarization norm {norm} differs from 1 by more than {POLARIZATION_NORM_TOL:e}"
            )));
        }
        if !self.central_frequency.is_finite() || !self.emission_time.is_finite() {
            return Err(Error::InvalidSpectrum(
                "central frequency and emission time must be finite".into(),
            ));
        }
        if self.kind == SpectrumKind::GaussianPulse
            && !(self.bandwidth > 0.0 && self.bandwidth.is_finite())
        {
            return Err(Error::InvalidSpectrum(format!(
                "Gaussian bandwidth must be positive and finite, got {}",
                self.bandwidth
            )));
        }
        Ok(())
    }

    /// `ξ(ω)` for Gaussian pulses; `None` for the delta kind, which has no
    /// pointwise representation.
    pub fn amplitude(&self, omega: f64) -> Option<[Complex64; 2]> {
        match self.kind {
            SpectrumKind::GaussianPulse => {
                let sigma = self.bandwidth;
                let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
                let x = omega - self.central_frequency;
                let envelope = Complex64::new(-x * x / (4.0 * sigma * sigma), omega * self.emission_time)
                    .exp()
                    * norm;
                Some([self.polarization[0] * envelope, self.polarization[1] * envelope])
            }
            SpectrumKind::Delta => None,
        }
    }

    fn quadrature_window(&self) -> (f64, f64) {
        let w = QUADRATURE_HALF_WIDTH * self.bandwidth;
        (self.central_frequency - w, self.central_frequency + w)
    }

    /// `∫ |ξ(ω)|² dω` by adaptive quadrature (Gaussian kind only).
    pub fn norm_squared_quadrature(&self) -> Result<f64> {
        Ok(overlap_quadrature(self, self)?.re)
    }
}

fn polarization_dot(a: &SpectralAmplitude, b: &SpectralAmplitude) -> Complex64 {
    a.polarization[0].conj() * b.polarization[0] + a.polarization[1].conj() * b.polarization[1]
}

/// Two-photon overlap `g(a, b) = ∫ dω ξ_a(ω)† ξ_b(ω)`.
///
/// Gaussian pairs use the closed form of the Gaussian integral. Delta spectra
/// overlap only with delta spectra of identical central frequency; against a
/// Gaussian of finite width the overlap vanishes in the delta limit.
pub fn overlap(a: &SpectralAmplitude, b: &SpectralAmplitude) -> Result<Complex64> {
    a.validate()?;
    b.validate()?;
    let pol = polarization_dot(a, b);
    let tau = b.emission_time - a.emission_time;
    let envelope = match (a.kind, b.kind) {
        (SpectrumKind::GaussianPulse, SpectrumKind::GaussianPulse) => {
            gaussian_overlap(a.central_frequency, a.bandwidth, b.central_frequency, b.bandwidth, tau)
        }
        (SpectrumKind::Delta, SpectrumKind::Delta) => {
            if a.central_frequency == b.central_frequency {
                Complex64::new(0.0, a.central_frequency * tau).exp()
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        _ => Complex64::new(0.0, 0.0),
    };
    Ok(pol * envelope)
}

// ∫ N_a N_b exp(-α ω² + β ω - γ) dω = N_a N_b √(π/α) exp(β²/4α - γ), with the
// exponent rearranged so that no large terms cancel.
fn gaussian_overlap(mu_a: f64, sigma_a: f64, mu_b: f64, sigma_b: f64, tau: f64) -> Complex64 {
    let wa = 0.25 / (sigma_a * sigma_a);
    let wb = 0.25 / (sigma_b * sigma_b);
    let alpha = wa + wb;
    let dmu = mu_a - mu_b;
    let re = -wa * wb * dmu * dmu / alpha - tau * tau / (4.0 * alpha);
    let im = tau * (wa * mu_a + wb * mu_b) / alpha;
    // N_a N_b √(π/α) = √(2 σ_a σ_b / (σ_a² + σ_b²))
    let prefactor = (2.0 * sigma_a * sigma_b / (sigma_a * sigma_a + sigma_b * sigma_b)).sqrt();
    Complex64::new(re, im).exp() * prefactor
}

/// [`overlap`] by adaptive Gauss–Kronrod quadrature over the union of the two
/// `ω₀ ± 10Δω` windows. Gaussian spectra only.
pub fn overlap_quadrature(a: &SpectralAmplitude, b: &SpectralAmplitude) -> Result<Complex64> {
    a.validate()?;
    b.validate()?;
    if a.kind != SpectrumKind::GaussianPulse || b.kind != SpectrumKind::GaussianPulse {
        return Err(Error::InvalidSpectrum(
            "quadrature overlap needs pointwise spectra (GaussianPulse)".into(),
        ));
    }
    let (la, ua) = a.quadrature_window();
    let (lb, ub) = b.quadrature_window();
    let integrand = |w: f64| {
        let xa = a.amplitude(w).expect("gaussian");
        let xb = b.amplitude(w).expect("gaussian");
        xa[0].conj() * xb[0] + xa[1].conj() * xb[1]
    };
    let est = quadrature::integrate(integrand, la.min(lb), ua.max(ub), QUADRATURE_TOL)?;
    Ok(est.value)
}

/// Hermitian positive semidefinite matrix of pairwise overlaps with unit
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: CMatrix,
}

impl GramMatrix {
    /// Validates and wraps an explicit matrix.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let g = Self { entries };
        g.validate()?;
        Ok(g)
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: CMatrix::identity(n, n) }
    }

    pub fn all_ones(n: usize) -> Self {
        Self { entries: CMatrix::from_element(n, n, Complex64::new(1.0, 0.0)) }
    }

    /// Ones on `group × group` and on the diagonal, zero elsewhere: the
    /// photons indexed by `group` are mutually indistinguishable and the rest
    /// are distinguishable from everything.
    pub fn block(n: usize, group: &[usize]) -> Result<Self> {
        let mut member = vec![false; n];
        for &i in group {
            if i >= n {
                return Err(Error::DimensionMismatch { expected: n, found: i + 1 });
            }
            member[i] = true;
        }
        let entries = CMatrix::from_fn(n, n, |i, j| {
            if i == j || (member[i] && member[j]) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { entries })
    }

    /// Gram matrix of internal-state vectors: `g(s, s') = ⟨v_s, v_s'⟩`. Each
    /// column of `vectors` is one photon; columns are normalized first.
    pub fn from_state_vectors(vectors: &CMatrix) -> Result<Self> {
        let mut v = vectors.clone();
        for mut col in v.column_iter_mut() {
            let norm = col.norm();
            if norm == 0.0 {
                return Err(Error::InvalidGram("zero internal-state vector".into()));
            }
            col /= Complex64::new(norm, 0.0);
        }
        let mut entries = v.adjoint() * &v;
        for i in 0..entries.nrows() {
            entries[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Self::new(entries)
    }

    /// Random Gram matrix of `n` photons whose internal states are complex
    /// Gaussian vectors in `rank` dimensions.
    pub fn random<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Result<Self> {
        let v = CMatrix::from_fn(rank.max(1), n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        Self::from_state_vectors(&v)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_part(&self.entries)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks every Gram invariant: Hermitian, unit diagonal, bounded
    /// moduli, positive semidefinite.
    pub fn validate(&self) -> Result<()> {
        check_gram(&self.entries)
    }

    /// The indistinguishable group if the matrix is exactly of block form
    /// (see [`GramMatrix::block`]) up to `tol`. Identity yields an empty
    /// group, all-ones yields every index.
    pub fn indistinguishable_group(&self, tol: f64) -> Option<Vec<usize>> {
        let n = self.dim();
        let one = |z: Complex64| (z - Complex64::new(1.0, 0.0)).norm() <= tol;
        let zero = |z: Complex64| z.norm() <= tol;
        let group: Vec<usize> = (0..n)
            .filter(|&i| (0..n).any(|j| j != i && one(self.get(i, j))))
            .collect();
        let mut member = vec![false; n];
        for &i in &group {
            member[i] = true;
        }
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                let ok = if i == j || (member[i] && member[j]) { one(z) } else { zero(z) };
                if !ok {
                    return None;
                }
            }
        }
        if group.len() == 1 {
            return Some(Vec::new());
        }
        Some(group)
    }
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub(crate) fn check_gram(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    if n == 0 {
        return Err(Error::InvalidGram("empty matrix".into()));
    }
    for i in 0..n {
        if !((m[(i, i)] - Complex64::new(1.0, 0.0)).norm() <= GRAM_DIAGONAL_TOL) {
            return Err(Error::InvalidGram(format!(
                "diagonal entry ({i},{i}) = {} is not 1",
                m[(i, i)]
            )));
        }
        for j in 0..n {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidGram(format!("entry ({i},{j}) is not finite")));
            }
            if (z - m[(j, i)].conj()).norm() > GRAM_HERMITIAN_TOL {
                return Err(Error::InvalidGram(format!(
                    "not Hermitian at ({i},{j}): {} vs conj {}",
                    z,
                    m[(j, i)].conj()
                )));
            }
            if z.norm() > 1.0 + GRAM_MODULUS_TOL {
                return Err(Error::InvalidGram(format!("|g({i},{j})| = {} exceeds 1", z.norm())));
            }
        }
    }
    let min_eig = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -GRAM_PSD_TOL {
        return Err(Error::GramNotPsd { eigenvalue: min_eig, tolerance: -GRAM_PSD_TOL });
    }
    Ok(())
}

/// Gram matrix of a photon set, `G[s][s'] = overlap(spectra[s], spectra[s'])`.
pub fn gram_matrix(spectra: &[SpectralAmplitude]) -> Result<GramMatrix> {
    let n = spectra.len();
    if n == 0 {
        return Err(Error::InvalidGram("at least one photon is required".into()));
    }
    let mut entries = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        entries[(i, i)] = overlap(&spectra[i], &spectra[i])?;
        for j in i + 1..n {
            let g = overlap(&spectra[i], &spectra[j])?;
            entries[(i, j)] = g;
            entries[(j, i)] = g.conj();
        }
    }
    GramMatrix::new(entries)
}

/// `f_ρ = Π_s g(s, ρ(s))`.
pub fn indistinguishability_weight(gram: &GramMatrix, rho: &Permutation) -> Result<Complex64> {
    if rho.len() != gram.dim() {
        return Err(Error::DimensionMismatch { expected: gram.dim(), found: rho.len() });
    }
    Ok((0..rho.len()).map(|s| gram.get(s, rho.apply(s))).product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pulse(omega0: f64, dw: f64, t0: f64) -> SpectralAmplitude {
        SpectralAmplitude::gaussian(omega0, dw, t0, SpectralAmplitude::horizontal()).unwrap()
    }

    #[test]
    fn identical_spectra_overlap_to_one() {
        let a = pulse(100.0, 1.0, 0.3);
        let g = overlap(&a, &a).unwrap();
        assert!((g - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn orthogonal_polarizations_do_not_overlap() {
        let a = pulse(100.0, 1.0, 0.0);
        let b = SpectralAmplitude::gaussian(100.0, 1.0, 0.0, SpectralAmplitude::vertical()).unwrap();
        assert_eq!(overlap(&a, &b).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn unit_offset_matches_quadrature() {
        let a = pulse(100.0, 1.0, 0.0);
        let b = pulse(100.0, 1.0, 1.0);
        let closed = overlap(&a, &b).unwrap();
        let quad = overlap_quadrature(&a, &b).unwrap();
        assert!((closed - quad).norm() < 1e-10, "{closed} vs {quad}");
        // Gaussian in the offset with unit exponent for Δω = 1
        assert!((closed.norm_sqr() - (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn rejects_unnormalized_polarization() {
        let err = SpectralAmplitude::gaussian(1.0, 1.0, 0.0, [c(1.0, 0.0), c(0.1, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidSpectrum(_)));
        let err = SpectralAmplitude::gaussian(1.0, 0.0, 0.0, SpectralAmplitude::horizontal()).unwrap_err();
        assert!(matches!(err, Error::InvalidSpectrum(_)));
    }

    #[test]
    fn normalization_by_quadrature() {
        let a = SpectralAmplitude::gaussian(
            50.0,
            2.5,
            -1.0,
            [c(0.6, 0.0), c(0.0, 0.8)],
        )
        .unwrap();
        assert!((a.norm_squared_quadrature().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn delta_spectra() {
        let a = SpectralAmplitude::delta(3.0, 0.0, SpectralAmplitude::horizontal()).unwrap();
        let b = SpectralAmplitude::delta(3.0, 2.0, SpectralAmplitude::horizontal()).unwrap();
        let d = SpectralAmplitude::delta(4.0, 0.0, SpectralAmplitude::horizontal()).unwrap();
        assert!((overlap(&a, &b).unwrap() - Complex64::new(0.0, 6.0).exp()).norm() < 1e-15);
        assert_eq!(overlap(&a, &d).unwrap(), c(0.0, 0.0));
        assert_eq!(overlap(&a, &pulse(3.0, 1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(overlap_quadrature(&a, &b).is_err());
    }

    #[test]
    fn gram_identical_and_orthogonal() {
        let a = pulse(10.0, 1.0, 0.0);
        let g = gram_matrix(&[a, a, a]).unwrap();
        assert!((g.entries() - GramMatrix::all_ones(3).entries()).norm() < 1e-14);

        let h = pulse(10.0, 1.0, 0.0);
        let v = SpectralAmplitude::gaussian(10.0, 1.0, 0.0, SpectralAmplitude::vertical()).unwrap();
        let g = gram_matrix(&[h, v]).unwrap();
        assert!((g.entries() - GramMatrix::identity(2).entries()).norm() < 1e-15);
    }

    #[test]
    fn gram_of_time_ladder_is_toeplitz_and_decaying() {
        let tau = 0.7;
        let s: Vec<_> = (0..3).map(|k| pulse(20.0, 1.3, k as f64 * tau)).collect();
        let g = gram_matrix(&s).unwrap();
        assert!((g.get(0, 1) - g.get(1, 2)).norm() < 1e-12);
        assert!(g.get(0, 2).norm() < g.get(0, 1).norm());
        assert!(g.min_eigenvalue() > -1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let q = overlap_quadrature(&s[i], &s[j]).unwrap();
                assert!((q - g.get(i, j)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn weights_in_limiting_cases() {
        let swap = Permutation::new(vec![1, 0, 2]).unwrap();
        let id = Permutation::identity(3);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let g = GramMatrix::random(3, 2, &mut rng).unwrap();
        assert!((indistinguishability_weight(&g, &id).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(indistinguishability_weight(&GramMatrix::identity(3), &swap).unwrap(), c(0.0, 0.0));
        assert_eq!(indistinguishability_weight(&GramMatrix::all_ones(3), &swap).unwrap(), c(1.0, 0.0));
        assert!(matches!(
            indistinguishability_weight(&g, &Permutation::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weight_of_inverse_is_conjugate() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for n in 1..=5 {
            let g = GramMatrix::random(n, n, &mut rng).unwrap();
            for rho in Permutation::all(n) {
                let f = indistinguishability_weight(&g, &rho).unwrap();
                let finv = indistinguishability_weight(&g, &rho.inverse()).unwrap();
                assert!((finv - f.conj()).norm() < 1e-14);
                assert!(f.norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn gram_validation_failures() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(GramMatrix::new(m.clone()), Err(Error::InvalidGram(_))));
        m[(1, 0)] = c(0.5, 0.0);
        assert!(GramMatrix::new(m).is_ok());

        // |g| ≤ 1 everywhere but not PSD
        let mut m = CMatrix::from_element(3, 3, c(-0.9, 0.0));
        for i in 0..3 {
            m[(i, i)] = c(1.0, 0.0);
        }
        match GramMatrix::new(m) {
            Err(Error::GramNotPsd { eigenvalue, .. }) => assert!((eigenvalue + 0.8).abs() < 1e-12),
            other => panic!("expected PSD failure, got {other:?}"),
        }
    }

    #[test]
    fn block_group_detection() {
        let g = GramMatrix::block(4, &[1, 3]).unwrap();
        assert_eq!(g.indistinguishable_group(1e-12), Some(vec![1, 3]));
        assert_eq!(GramMatrix::identity(3).indistinguishable_group(1e-12), Some(vec![]));
        assert_eq!(GramMatrix::all_ones(3).indistinguishable_group(1e-12), Some(vec![0, 1, 2]));
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        assert_eq!(GramMatrix::random(3, 3, &mut rng).unwrap().indistinguishable_group(1e-12), None);
    }
}

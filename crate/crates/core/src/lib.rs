// SPDX-License-Identifier: Apache-2.0

//! Exact output statistics of partially distinguishable single photons in a
//! linear interferometer.
//!
//! The detection probability of an `N`-photon output sample is a weighted sum
//! of matrix permanents, one per permutation of the photons, where each weight
//! is a product of pairwise spectral overlaps:
//!
//! ```text
//! P(D; S) = Σ_ρ  f_ρ · perm A_ρ,     f_ρ = Π_s g(s, ρ(s)),
//! A_ρ[d][s] = conj(U[d][s]) · U[d][ρ(s)]
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`spectra`]: photon spectral amplitudes, pairwise overlaps, Gram matrices.
//! - [`unitary`]: interferometer matrices, submatrix extraction, `A_ρ`.
//! - [`permanent`]: naive and Ryser/Gray-code permanent kernels.
//! - [`probability`]: the permutation-weighted permanent sum and its
//!   limiting-case fast paths.
//! - [`distribution`]: full output distributions, exact sampling, and an
//!   independent Fock-space oracle.
//! - [`dip`]: the two-photon coincidence dip as a function of emission delay.
//!
//! ```
//! use multiboson::{balanced_beam_splitter, GramMatrix, PortConfiguration, probability_general};
//!
//! let u = balanced_beam_splitter();
//! let cfg = PortConfiguration::new(2, vec![0, 1], vec![1, 1]).unwrap();
//! // identical photons never leave the beam splitter in different ports
//! let p = probability_general(&u, &cfg, &GramMatrix::all_ones(2)).unwrap();
//! assert!(p.value.abs() < 1e-15);
//! ```

pub mod dip;
pub mod distribution;
mod error;
pub mod permanent;
pub mod permutation;
pub mod probability;
pub mod quadrature;
pub mod spectra;
pub mod unitary;

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

pub use dip::{dip_scan, DipPoint};
pub use distribution::oracle::fock_oracle;
pub use distribution::{build_distribution, enumerate_samples, sample, OutputDistribution};
pub use error::{Error, Result};
pub use permanent::{permanent_naive, permanent_ryser, permanent_ryser_parallel, Algorithm, PermanentResult};
pub use permutation::Permutation;
pub use probability::{
    probability_distinguishable, probability_general, probability_general_unpaired,
    probability_identical, probability_mixed_groups, DetectionProbability, EvaluationPath,
};
pub use spectra::{
    gram_matrix, indistinguishability_weight, overlap, overlap_quadrature, GramMatrix,
    SpectralAmplitude, SpectrumKind,
};
pub use unitary::{
    balanced_beam_splitter, haar_random, interference_matrix, submatrix, InterferenceMatrix,
    InterferometerMatrix, PortConfiguration,
};

/// Number of worker threads requested through `MULTIBOSON_THREADS`, if set
/// to a positive integer.
pub fn thread_cap_from_env() -> Option<usize> {
    std::env::var("MULTIBOSON_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

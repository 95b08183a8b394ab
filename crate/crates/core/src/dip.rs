// SPDX-License-Identifier: Apache-2.0

//! Two-photon coincidence probability as a function of the emission delay
//! between two Gaussian pulses.

use num_complex::Complex64;

use crate::probability::probability_general;
use crate::spectra::{overlap, GramMatrix, SpectralAmplitude, SpectrumKind};
use crate::{CMatrix, Error, InterferometerMatrix, PortConfiguration, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipPoint {
    /// Emission time of the second photon minus that of the first.
    pub tau: f64,
    /// `|g(a, b)|²` at this delay.
    pub overlap_sq: f64,
    /// Probability of one photon in each of the two output ports matching
    /// the input ports.
    pub coincidence: f64,
}

/// Evenly spaced delays from `tau_min` to `tau_max` inclusive; a single step
/// yields only `tau_min`.
pub fn delays(tau_min: f64, tau_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![tau_min],
        _ => (0..steps)
            .map(|i| tau_min + (tau_max - tau_min) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// Sweeps the delay of `second` relative to `first`, both Gaussian pulses
/// entering `ports[0]` and `ports[1]` of `u`.
pub fn dip_scan(
    u: &InterferometerMatrix,
    ports: [usize; 2],
    first: &SpectralAmplitude,
    second: &SpectralAmplitude,
    tau_min: f64,
    tau_max: f64,
    steps: usize,
) -> Result<Vec<DipPoint>> {
    if first.kind != SpectrumKind::GaussianPulse || second.kind != SpectrumKind::GaussianPulse {
        return Err(Error::InvalidSpectrum("delay scan needs two Gaussian pulses".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidConfiguration("delay scan needs at least one step".into()));
    }
    if !tau_min.is_finite() || !tau_max.is_finite() {
        return Err(Error::InvalidConfiguration("delay range must be finite".into()));
    }
    let mut occupation = vec![0; u.dim()];
    for &p in &ports {
        if p >= u.dim() {
            return Err(Error::PortOutOfRange { index: p, ports: u.dim() });
        }
        occupation[p] += 1;
    }
    let cfg = PortConfiguration::new(u.dim(), ports.to_vec(), occupation)?;
    let one = Complex64::new(1.0, 0.0);
    delays(tau_min, tau_max, steps)
        .into_iter()
        .map(|tau| {
            let delayed = second.with_emission_time(first.emission_time + tau);
            let g = overlap(first, &delayed)?;
            let gram = GramMatrix::new(CMatrix::from_row_slice(2, 2, &[one, g, g.conj(), one]))?;
            let p = probability_general(u, &cfg, &gram)?;
            Ok(DipPoint { tau, overlap_sq: g.norm_sqr(), coincidence: p.value })
        })
        .collect()
}

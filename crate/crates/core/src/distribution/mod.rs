// SPDX-License-Identifier: Apache-2.0

//! Full output distributions over all output multisets, exact sampling, and
//! serialization.
//!
//! Output multisets are stored as occupation vectors in colex order: vectors
//! compare by their last entry first, so for two ports and two photons the
//! order is `(2,0), (1,1), (0,2)`.

pub mod oracle;

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::probability::{self, GENERAL_MAX_N, LIMITING_FORM_TOL};
use crate::spectra::GramMatrix;
use crate::unitary::validate_inputs;
use crate::{Error, InterferometerMatrix, PortConfiguration, Result};

pub const TOTAL_TOL: f64 = 1e-8;
pub const NEGATIVE_TOL: f64 = 1e-10;
/// Largest table `build_distribution` will assemble.
pub const MAX_SAMPLES: u64 = 5_000_000;

/// All weak compositions of `n` into `m` parts, colex order.
pub fn enumerate_samples(m: usize, n: usize) -> Vec<Vec<usize>> {
    bounded_compositions(&vec![n; m], n)
}

/// Compositions of `total` with part `i` at most `bounds[i]`, colex order.
pub(crate) fn bounded_compositions(bounds: &[usize], total: usize) -> Vec<Vec<usize>> {
    let Some((&last_bound, init)) = bounds.split_last() else {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    };
    let mut out = Vec::new();
    for last in 0..=last_bound.min(total) {
        for mut prefix in bounded_compositions(init, total - last) {
            prefix.push(last);
            out.push(prefix);
        }
    }
    out
}

/// Number of output multisets, `C(m + n - 1, n)`.
pub fn sample_space_size(m: usize, n: usize) -> f64 {
    if m == 0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (0..n).fold(1.0, |acc, i| acc * (m - 1 + n - i) as f64 / (i + 1) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub occupation: Vec<usize>,
    pub probability: f64,
}

/// Probability table over output occupation vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDistribution {
    m: usize,
    n: usize,
    entries: Vec<DistributionEntry>,
    total: f64,
}

impl OutputDistribution {
    /// Wraps a table without checking normalization; see
    /// [`OutputDistribution::validate`].
    pub fn new(m: usize, n: usize, entries: Vec<DistributionEntry>) -> Result<Self> {
        for e in &entries {
            if e.occupation.len() != m || e.occupation.iter().sum::<usize>() != n {
                return Err(Error::InvalidDistribution(format!(
                    "occupation {:?} is not a sample of {n} photons in {m} ports",
                    e.occupation
                )));
            }
        }
        let total = entries.iter().map(|e| e.probability).sum();
        Ok(Self { m, n, entries, total })
    }

    pub fn ports(&self) -> usize {
        self.m
    }

    pub fn photons(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[DistributionEntry] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probability_of(&self, occupation: &[usize]) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.occupation == occupation)
            .map(|e| e.probability)
    }

    /// Total within [`TOTAL_TOL`] of one and no entry below `-NEGATIVE_TOL`.
    pub fn validate(&self) -> Result<()> {
        if !((self.total - 1.0).abs() < TOTAL_TOL) {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {} (tolerance {TOTAL_TOL:e})",
                self.total
            )));
        }
        if let Some(e) = self.entries.iter().find(|e| !(e.probability >= -NEGATIVE_TOL)) {
            return Err(Error::InvalidDistribution(format!(
                "probability {} of {:?} is negative",
                e.probability, e.occupation
            )));
        }
        Ok(())
    }

    /// Largest entrywise difference to another table over the same samples.
    pub fn max_abs_diff(&self, other: &OutputDistribution) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::InvalidDistribution("tables have different sizes".into()));
        }
        let mut worst = 0.0f64;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if a.occupation != b.occupation {
                return Err(Error::InvalidDistribution(format!(
                    "sample order differs: {:?} vs {:?}",
                    a.occupation, b.occupation
                )));
            }
            worst = worst.max((a.probability - b.probability).abs());
        }
        Ok(worst)
    }

    /// CSV with one column per output port followed by `probability`.
    /// Probabilities are written in shortest round-trip form.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (0..self.m).map(|d| format!("port_{d}")).collect();
        header.push("probability".into());
        w.write_record(&header).map_err(ser)?;
        for e in &self.entries {
            let mut record: Vec<String> = e.occupation.iter().map(|n| n.to_string()).collect();
            record.push(format!("{:?}", e.probability));
            w.write_record(&record).map_err(ser)?;
        }
        w.flush().map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let m = r.headers().map_err(ser)?.len().saturating_sub(1);
        let mut entries = Vec::new();
        for record in r.records() {
            let record = record.map_err(ser)?;
            let parse_err = |f: &str| Error::Serialization(format!("bad field {f:?}"));
            let occupation = record
                .iter()
                .take(m)
                .map(|f| f.trim().parse::<usize>().map_err(|_| parse_err(f)))
                .collect::<Result<Vec<_>>>()?;
            let p = record.get(m).ok_or_else(|| parse_err(""))?;
            let probability = p.trim().parse::<f64>().map_err(|_| parse_err(p))?;
            entries.push(DistributionEntry { occupation, probability });
        }
        let n = entries.first().map_or(0, |e| e.occupation.iter().sum());
        Self::new(m, n, entries)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        // recompute rather than trust the stored diagnostic
        Self::new(d.m, d.n, d.entries)
    }
}

fn ser(e: csv::Error) -> Error {
    Error::Serialization(e.to_string())
}

/// Detection probability of every output multiset for photons injected at
/// `input_ports` (row `s` of `gram` belongs to `input_ports[s]`).
pub fn build_distribution(
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
    let size = sample_space_size(m, n);
    if size > MAX_SAMPLES as f64 {
        return Err(Error::Infeasible {
            what: format!("distribution over {size:.3e} output samples"),
            cost: size * 2f64.powi(n as i32) * n as f64,
            limit: format!("{MAX_SAMPLES} samples"),
        });
    }
    let limiting = gram.indistinguishable_group(LIMITING_FORM_TOL).is_some();
    if !limiting && n > GENERAL_MAX_N {
        return Err(Error::Infeasible {
            what: format!("general-path distribution for {n} photons"),
            cost: size
                * crate::permutation::factorial_f64(n)
                * 2f64.powi(n as i32)
                * n as f64,
            limit: format!("N <= {GENERAL_MAX_N} unless the Gram matrix has limiting form"),
        });
    }
    let samples = enumerate_samples(m, n);
    let entries = samples
        .into_par_iter()
        .map(|occupation| {
            let cfg = PortConfiguration::new(m, input_ports.to_vec(), occupation)?;
            let p = probability::probability(u, &cfg, gram)?;
            Ok(DistributionEntry { occupation: cfg.output_sample().to_vec(), probability: p.value })
        })
        .collect::<Result<Vec<_>>>()?;
    let dist = OutputDistribution::new(m, n, entries)?;
    dist.validate()?;
    Ok(dist)
}

/// `count` i.i.d. draws by inverse CDF over the table with negative entries
/// clamped to zero. Draws come from ChaCha20 seeded with `seed`.
pub fn sample(dist: &OutputDistribution, count: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    dist.validate()?;
    let mut cumulative = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for e in dist.entries() {
        acc += e.probability.max(0.0);
        cumulative.push(acc);
    }
    if !(acc > 0.0) {
        return Err(Error::InvalidDistribution("no positive probability to sample".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let last = cumulative.len() - 1;
    Ok((0..count)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            let idx = cumulative.partition_point(|&c| c <= u).min(last);
            dist.entries()[idx].occupation.clone()
        })
        .collect())
}

// SPDX-License-Identifier: Apache-2.0

//! JSON scenario files.
//!
//! ```json
//! {
//!   "unitary": {"haar": {"m": 4, "seed": 42}},
//!   "inputs": [
//!     {"port": 0, "spectrum": {"kind": "gaussian", "omega0": 100.0, "delta_omega": 1.0,
//!                              "t0": 0.0, "polarization": [1, 0, 0, 0]}},
//!     {"port": 1, "spectrum": {"kind": "gaussian", "omega0": 100.0, "delta_omega": 1.0,
//!                              "t0": 0.5, "polarization": [1, 0, 0, 0]}}
//!   ],
//!   "output": {"format": "csv", "path": "dist.csv"}
//! }
//! ```
//!
//! Units: `omega0` and `delta_omega` are angular frequencies; `t0` is a time
//! in the reciprocal unit (e.g. `1/Δω`). `polarization` is the Jones vector
//! `[re₁, im₁, re₂, im₂]`. The unitary is one of `{"haar": {"m", "seed"}}`,
//! `{"explicit": [[entry, ...], ...]}` (row-major, each entry a number or
//! `[re, im]`) or `{"beamsplitter": {}}`. Instead of per-input spectra a
//! `gram_override` matrix (same entry format) may be given.

use std::path::{Path, PathBuf};

use multiboson::{
    balanced_beam_splitter, gram_matrix, haar_random, CMatrix, Complex64, GramMatrix,
    InterferometerMatrix, SpectralAmplitude,
};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum ComplexEntry {
    Pair([f64; 2]),
    Real(f64),
}

impl From<ComplexEntry> for Complex64 {
    fn from(e: ComplexEntry) -> Self {
        match e {
            ComplexEntry::Pair([re, im]) => Complex64::new(re, im),
            ComplexEntry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

/// Row-major complex matrix; rows must have equal length.
pub fn matrix_from_rows(rows: &[Vec<ComplexEntry>]) -> std::result::Result<CMatrix, String> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(format!("row {i} has {} entries, expected {cols}", r.len()));
    }
    let flat: Vec<Complex64> = rows.iter().flatten().map(|&e| e.into()).collect();
    Ok(CMatrix::from_row_slice(n, cols, &flat))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum UnitarySpec {
    Haar { m: usize, seed: u64 },
    Explicit(Vec<Vec<ComplexEntry>>),
    Beamsplitter {},
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SpectrumKindSpec {
    #[serde(rename = "gaussian", alias = "GaussianPulse", alias = "gaussian_pulse")]
    Gaussian,
    #[serde(rename = "delta", alias = "Delta")]
    Delta,
}

fn horizontal() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub kind: SpectrumKindSpec,
    pub omega0: f64,
    #[serde(default)]
    pub delta_omega: f64,
    #[serde(default)]
    pub t0: f64,
    #[serde(default = "horizontal")]
    pub polarization: [f64; 4],
}

impl SpectrumSpec {
    pub fn to_amplitude(&self) -> multiboson::Result<SpectralAmplitude> {
        let p = self.polarization;
        let pol = [Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3])];
        match self.kind {
            SpectrumKindSpec::Gaussian => {
                SpectralAmplitude::gaussian(self.omega0, self.delta_omega, self.t0, pol)
            }
            SpectrumKindSpec::Delta => SpectralAmplitude::delta(self.omega0, self.t0, pol),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub port: usize,
    #[serde(default)]
    pub spectrum: Option<SpectrumSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub unitary: UnitarySpec,
    pub inputs: Vec<InputSpec>,
    #[serde(default)]
    pub gram_override: Option<Vec<Vec<ComplexEntry>>>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Read { path: path.display().to_string(), source })?;
        Self::parse(&text).map_err(|message| CliError::Parse {
            path: path.display().to_string(),
            message,
        })
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn input_ports(&self) -> Vec<usize> {
        self.inputs.iter().map(|i| i.port).collect()
    }

    /// The transfer matrix as written, without the unitarity check.
    pub fn raw_unitary(&self) -> Result<CMatrix> {
        Ok(match &self.unitary {
            UnitarySpec::Haar { m, seed } => haar_random(*m, *seed)?.entries().clone(),
            UnitarySpec::Beamsplitter {} => balanced_beam_splitter().entries().clone(),
            UnitarySpec::Explicit(rows) => matrix_from_rows(rows).map_err(CliError::Scenario)?,
        })
    }

    pub fn unitary(&self) -> Result<InterferometerMatrix> {
        Ok(match &self.unitary {
            UnitarySpec::Haar { m, seed } => haar_random(*m, *seed)?,
            UnitarySpec::Beamsplitter {} => balanced_beam_splitter(),
            UnitarySpec::Explicit(_) => InterferometerMatrix::from_explicit(self.raw_unitary()?)?,
        })
    }

    /// Checks the structural invariants: at least one photon, distinct
    /// in-range ports, and exactly one of per-input spectra or a Gram
    /// override.
    pub fn check_structure(&self, ports: usize) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(CliError::Scenario("no input photons".into()));
        }
        let mut seen = vec![false; ports];
        for i in &self.inputs {
            if i.port >= ports {
                return Err(CliError::Scenario(format!(
                    "input port {} out of range for {ports} ports",
                    i.port
                )));
            }
            if std::mem::replace(&mut seen[i.port], true) {
                return Err(CliError::Scenario(format!("input port {} used twice", i.port)));
            }
        }
        let with_spectrum = self.inputs.iter().filter(|i| i.spectrum.is_some()).count();
        match (&self.gram_override, with_spectrum) {
            (Some(_), 0) => Ok(()),
            (Some(_), _) => Err(CliError::Scenario(
                "give either per-input spectra or gram_override, not both".into(),
            )),
            (None, k) if k == self.inputs.len() => Ok(()),
            (None, _) => Err(CliError::Scenario(
                "every input needs a spectrum when no gram_override is given".into(),
            )),
        }
    }

    pub fn spectra(&self) -> Result<Vec<SpectralAmplitude>> {
        self.inputs
            .iter()
            .map(|i| {
                let spec = i.spectrum.as_ref().ok_or_else(|| {
                    CliError::Scenario(format!("input port {} has no spectrum", i.port))
                })?;
                Ok(spec.to_amplitude()?)
            })
            .collect()
    }

    /// The override matrix as written, without Gram validation.
    pub fn raw_gram_override(&self) -> Result<Option<CMatrix>> {
        self.gram_override
            .as_ref()
            .map(|rows| matrix_from_rows(rows).map_err(CliError::Scenario))
            .transpose()
    }

    pub fn gram(&self) -> Result<GramMatrix> {
        match self.raw_gram_override()? {
            Some(m) => {
                if m.nrows() != self.inputs.len() {
                    return Err(CliError::Scenario(format!(
                        "gram_override is {}x{} but there are {} inputs",
                        m.nrows(),
                        m.ncols(),
                        self.inputs.len()
                    )));
                }
                Ok(GramMatrix::new(m)?)
            }
            None => Ok(gram_matrix(&self.spectra()?)?),
        }
    }

    pub fn output_format(&self) -> Option<Format> {
        self.output.as_ref().and_then(|o| o.format)
    }

    pub fn output_path(&self) -> Option<&Path> {
        self.output.as_ref().and_then(|o| o.path.as_deref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_unitary_forms() {
        let s = Scenario::parse(
            r#"{"unitary": {"beamsplitter": {}}, "inputs": [{"port": 0}, {"port": 1}],
                "gram_override": [[1, [0.5, 0]], [[0.5, 0], 1]]}"#,
        )
        .unwrap();
        assert!(matches!(s.unitary, UnitarySpec::Beamsplitter {}));
        s.check_structure(2).unwrap();
        assert!((s.gram().unwrap().get(0, 1).re - 0.5).abs() < 1e-15);

        let s = Scenario::parse(
            r#"{"unitary": {"haar": {"m": 3, "seed": 9}},
                "inputs": [{"port": 2, "spectrum": {"kind": "gaussian", "omega0": 10, "delta_omega": 1}}]}"#,
        )
        .unwrap();
        assert_eq!(s.unitary().unwrap().dim(), 3);
        assert_eq!(s.spectra().unwrap()[0].polarization, SpectralAmplitude::horizontal());

        let s = Scenario::parse(
            r#"{"unitary": {"explicit": [[0, 1], [1, 0]]}, "inputs": [{"port": 0}],
                "gram_override": [[1]]}"#,
        )
        .unwrap();
        assert_eq!(s.unitary().unwrap().get(1, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn structural_errors() {
        let both = Scenario::parse(
            r#"{"unitary": {"beamsplitter": {}},
                "inputs": [{"port": 0, "spectrum": {"kind": "delta", "omega0": 1}}, {"port": 1}],
                "gram_override": [[1, 0], [0, 1]]}"#,
        )
        .unwrap();
        assert!(both.check_structure(2).is_err());
        let dup = Scenario::parse(
            r#"{"unitary": {"beamsplitter": {}}, "inputs": [{"port": 1}, {"port": 1}],
                "gram_override": [[1, 0], [0, 1]]}"#,
        )
        .unwrap();
        assert!(dup.check_structure(2).is_err());
        assert!(Scenario::parse(r#"{"unitary": {"beamsplitter": {}}}"#).is_err());
        assert!(Scenario::parse(r#"{"unitary": {"qft": {}}, "inputs": []}"#).is_err());
    }
}

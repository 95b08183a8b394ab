// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error(
        "quadrature did not converge on [{lower}, {upper}]: error estimate {error_estimate:.3e} \
         exceeds tolerance {tolerance:.3e} after {intervals} subintervals"
    )]
    QuadratureNonConvergence {
        lower: f64,
        upper: f64,
        error_estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("port index {index} out of range for an interferometer with {ports} ports")]
    PortOutOfRange { index: usize, ports: usize },

    #[error("invalid port configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("matrix is not unitary: max |UU† - I| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("Gram matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e} below {tolerance:.1e}")]
    GramNotPsd { eigenvalue: f64, tolerance: f64 },

    #[error("{what}: refused, estimated cost ~{cost:.3e} operations (limit {limit})")]
    Infeasible {
        what: String,
        cost: f64,
        limit: String,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    /// True for refusals caused by problem size rather than bad input.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. })
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Interferometer unitaries, port configurations and the matrices derived
//! from them.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::permutation::{factorial_f64, Permutation};
use crate::{CMatrix, Error, Result};

/// Rejection threshold for user-supplied matrices.
pub const EXPLICIT_UNITARITY_TOL: f64 = 1e-8;
/// Guarantee for generated matrices.
pub const GENERATED_UNITARITY_TOL: f64 = 1e-10;

/// Largest entry of `U U† - I`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let prod = u * u.adjoint();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// An `M × M` unitary transfer matrix; `U[d][s]` is the amplitude from input
/// port `s` to output port `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerMatrix {
    entries: CMatrix,
}

impl InterferometerMatrix {
    /// Accepts a hand-entered matrix if it is unitary to
    /// [`EXPLICIT_UNITARITY_TOL`].
    pub fn from_explicit(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare { rows: entries.nrows(), cols: entries.ncols() });
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidConfiguration("interferometer needs at least one port".into()));
        }
        let deviation = unitarity_defect(&entries);
        if !(deviation < EXPLICIT_UNITARITY_TOL) {
            return Err(Error::NotUnitary { deviation, tolerance: EXPLICIT_UNITARITY_TOL });
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    #[inline]
    pub fn get(&self, d: usize, s: usize) -> Complex64 {
        self.entries[(d, s)]
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.entries)
    }
}

/// Haar-distributed `M × M` unitary from the QR decomposition of a complex
/// Ginibre matrix, with the phases of `R`'s diagonal moved into `Q`.
///
/// The Ginibre entries are drawn from ChaCha20 seeded with `seed`, so equal
/// `(m, seed)` give bit-identical matrices.
pub fn haar_random(m: usize, seed: u64) -> Result<InterferometerMatrix> {
    if m == 0 {
        return Err(Error::InvalidConfiguration("interferometer needs at least one port".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(haar_random_with(m, &mut rng))
}

pub fn haar_random_with<R: Rng + ?Sized>(m: usize, rng: &mut R) -> InterferometerMatrix {
    let mut z = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            z[(i, j)] = Complex64::new(re, im) * FRAC_1_SQRT_2;
        }
    }
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        col *= phase;
    }
    debug_assert!(unitarity_defect(&q) < GENERATED_UNITARITY_TOL);
    InterferometerMatrix { entries: q }
}

/// `(1/√2) [[1, i], [i, 1]]`.
pub fn balanced_beam_splitter() -> InterferometerMatrix {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let b = Complex64::new(0.0, FRAC_1_SQRT_2);
    InterferometerMatrix { entries: CMatrix::from_row_slice(2, 2, &[a, b, b, a]) }
}

/// Occupied input ports `S` (one photon each, in the listed order) and an
/// output sample `D` given as occupation numbers over all `M` output ports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PortConfiguration {
    ports: usize,
    input_ports: Vec<usize>,
    output_sample: Vec<usize>,
}

impl PortConfiguration {
    pub fn new(ports: usize, input_ports: Vec<usize>, output_sample: Vec<usize>) -> Result<Self> {
        validate_inputs(ports, &input_ports)?;
        if output_sample.len() != ports {
            return Err(Error::DimensionMismatch { expected: ports, found: output_sample.len() });
        }
        let total: usize = output_sample.iter().sum();
        if total != input_ports.len() {
            return Err(Error::InvalidConfiguration(format!(
                "output sample holds {total} photons but {} were injected",
                input_ports.len()
            )));
        }
        Ok(Self { ports, input_ports, output_sample })
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn photons(&self) -> usize {
        self.input_ports.len()
    }

    pub fn input_ports(&self) -> &[usize] {
        &self.input_ports
    }

    pub fn output_sample(&self) -> &[usize] {
        &self.output_sample
    }

    /// Output ports with multiplicity, ascending.
    pub fn output_rows(&self) -> Vec<usize> {
        occupation_to_rows(&self.output_sample)
    }

    /// `Π_d n_d!`.
    pub fn collision_factor(&self) -> f64 {
        self.output_sample.iter().map(|&n| factorial_f64(n)).product()
    }
}

pub(crate) fn validate_inputs(ports: usize, input_ports: &[usize]) -> Result<()> {
    let mut seen = vec![false; ports];
    for &s in input_ports {
        if s >= ports {
            return Err(Error::PortOutOfRange { index: s, ports });
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidConfiguration(format!("input port {s} listed twice")));
        }
    }
    Ok(())
}

pub(crate) fn occupation_to_rows(occupation: &[usize]) -> Vec<usize> {
    occupation
        .iter()
        .enumerate()
        .flat_map(|(d, &n)| std::iter::repeat_n(d, n))
        .collect()
}

/// Rows indexed by `rows` (repeats allowed), columns by `cols`.
pub(crate) fn select(u: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| u[(rows[i], cols[j])])
}

/// `U^(D,S)`: columns of `U` picked by the input ports in listed order, rows
/// by the output sample with repeated ports repeated, ascending.
pub fn submatrix(u: &InterferometerMatrix, cfg: &PortConfiguration) -> Result<CMatrix> {
    if cfg.ports() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: cfg.ports() });
    }
    Ok(select(u.entries(), &cfg.output_rows(), cfg.input_ports()))
}

/// `A_ρ[d][s] = conj(U[d][s]) · U[d][ρ(s)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceMatrix {
    entries: CMatrix,
}

impl InterferenceMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }
}

pub fn interference_matrix(u_sub: &CMatrix, rho: &Permutation) -> Result<InterferenceMatrix> {
    if !u_sub.is_square() {
        return Err(Error::NotSquare { rows: u_sub.nrows(), cols: u_sub.ncols() });
    }
    if rho.len() != u_sub.ncols() {
        return Err(Error::DimensionMismatch { expected: u_sub.ncols(), found: rho.len() });
    }
    let entries = CMatrix::from_fn(u_sub.nrows(), u_sub.ncols(), |d, s| {
        u_sub[(d, s)].conj() * u_sub[(d, rho.apply(s))]
    });
    Ok(InterferenceMatrix { entries })
}

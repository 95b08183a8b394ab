// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use multiboson::distribution::OutputDistribution;
use multiboson::{
    build_distribution, dip_scan, permanent_naive, permanent_ryser, permanent_ryser_parallel,
    sample, CMatrix, Complex64, PermanentResult, SpectrumKind,
};

use crate::error::{CliError, Result};
use crate::scenario::{matrix_from_rows, ComplexEntry, Format, Scenario};

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Output {
    fn resolve<'a>(&'a self, scenario: &'a Scenario) -> (Option<&'a Path>, Format) {
        let path = self.path.as_deref().or_else(|| scenario.output_path());
        let format = self.format.or_else(|| scenario.output_format()).unwrap_or(Format::Csv);
        (path, format)
    }
}

fn load_distribution(scenario: &Scenario) -> Result<OutputDistribution> {
    let u = scenario.unitary()?;
    scenario.check_structure(u.dim())?;
    let gram = scenario.gram()?;
    Ok(build_distribution(&u, &scenario.input_ports(), &gram)?)
}

pub fn write_distribution(dist: &OutputDistribution, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => dist.write_csv(&mut *out)?,
        Format::Json => writeln!(out, "{}", dist.to_json()?)?,
    }
    Ok(())
}

pub fn distribution(scenario_path: &Path, output: &Output) -> Result<()> {
    let scenario = Scenario::load(scenario_path)?;
    let start = Instant::now();
    let dist = load_distribution(&scenario)?;
    let elapsed = start.elapsed();
    let (path, format) = output.resolve(&scenario);
    let mut out = open_output(path)?;
    write_distribution(&dist, format, &mut out)?;
    out.flush()?;
    eprintln!("samples: {}", dist.len());
    eprintln!("total probability: {:.15}", dist.total());
    eprintln!("elapsed: {:.3} ms", elapsed.as_secs_f64() * 1e3);
    Ok(())
}

pub struct DipArgs {
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub steps: usize,
}

pub fn dip(scenario_path: &Path, args: &DipArgs, output: &Output) -> Result<()> {
    let scenario = Scenario::load(scenario_path)?;
    let u = scenario.unitary()?;
    scenario.check_structure(u.dim())?;
    if scenario.inputs.len() != 2 || scenario.gram_override.is_some() {
        return Err(CliError::Scenario("dip-scan needs exactly two photons with spectra".into()));
    }
    let spectra = scenario.spectra()?;
    if spectra.iter().any(|s| s.kind != SpectrumKind::GaussianPulse) {
        return Err(CliError::Scenario("dip-scan needs Gaussian pulse spectra".into()));
    }
    let width = 5.0 / spectra[0].bandwidth;
    let tau_min = args.tau_min.unwrap_or(-width);
    let tau_max = args.tau_max.unwrap_or(width);
    let ports = [scenario.inputs[0].port, scenario.inputs[1].port];
    let points = dip_scan(&u, ports, &spectra[0], &spectra[1], tau_min, tau_max, args.steps)?;

    let (path, _) = output.resolve(&scenario);
    let mut out = open_output(path)?;
    writeln!(out, "tau,overlap_sq,coincidence")?;
    for p in &points {
        writeln!(out, "{:?},{:?},{:?}", p.tau, p.overlap_sq, p.coincidence)?;
    }
    out.flush()?;
    Ok(())
}

pub fn sample_cmd(scenario_path: &Path, count: usize, seed: u64, output: &Output) -> Result<()> {
    let scenario = Scenario::load(scenario_path)?;
    let dist = load_distribution(&scenario)?;
    let draws = sample(&dist, count, seed)?;
    let (path, format) = output.resolve(&scenario);
    let mut out = open_output(path)?;
    match format {
        Format::Csv => {
            for d in &draws {
                let line: Vec<String> = d.iter().map(|n| n.to_string()).collect();
                writeln!(out, "{}", line.join(","))?;
            }
        }
        Format::Json => {
            let json = serde_json::to_string(&draws).expect("vectors of integers serialize");
            writeln!(out, "{json}")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a square matrix from JSON (rows of numbers or `[re, im]` pairs) or
/// CSV (one row per line, cells like `1.5`, `-2i` or `0.3+0.4i`).
pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.display().to_string(), source })?;
    let parse_err = |message: String| CliError::Parse { path: path.display().to_string(), message };
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, line)| {
                line.split(',')
                    .map(|cell| {
                        Complex64::from_str(cell.trim())
                            .map_err(|_| parse_err(format!("line {}: bad entry {:?}", i + 1, cell.trim())))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(parse_err(format!("matrix with {n} rows is not square")));
        }
        Ok(CMatrix::from_row_slice(n, n, &rows.concat()))
    } else {
        let rows: Vec<Vec<ComplexEntry>> =
            serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?;
        matrix_from_rows(&rows).map_err(parse_err)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PermanentAlgorithm {
    Ryser,
    Naive,
}

pub fn permanent(matrix_path: &Path, algorithm: PermanentAlgorithm, workers: usize) -> Result<()> {
    let a = read_matrix(matrix_path)?;
    let start = Instant::now();
    let result: PermanentResult = match algorithm {
        PermanentAlgorithm::Naive => permanent_naive(&a)?,
        PermanentAlgorithm::Ryser if workers > 1 => permanent_ryser_parallel(&a, workers)?,
        PermanentAlgorithm::Ryser => permanent_ryser(&a)?,
    };
    let elapsed = start.elapsed();
    let mut out = io::stdout().lock();
    writeln!(out, "n: {}", result.n)?;
    writeln!(out, "algorithm: {:?} ({} worker blocks)", result.algorithm, if algorithm == PermanentAlgorithm::Naive { 1 } else { workers.max(1) })?;
    writeln!(out, "value: {:?} {:+?}i", result.value.re, result.value.im)?;
    if result.ill_conditioned {
        writeln!(out, "warning: result is small relative to the matrix scale; relative accuracy is limited")?;
    }
    writeln!(out, "elapsed: {:.3} ms", elapsed.as_secs_f64() * 1e3)?;
    Ok(())
}

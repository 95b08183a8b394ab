// SPDX-License-Identifier: Apache-2.0

//! Invariant checks run by `multiboson validate`.

use std::fmt;
use std::path::Path;

use multiboson::distribution::oracle::{ORACLE_MAX_M, ORACLE_MAX_N};
use multiboson::probability::GENERAL_MAX_N;
use multiboson::unitary::{unitarity_defect, EXPLICIT_UNITARITY_TOL};
use multiboson::{
    build_distribution, enumerate_samples, fock_oracle, overlap, overlap_quadrature,
    probability_distinguishable, probability_general, probability_general_unpaired,
    probability_identical, GramMatrix, InterferometerMatrix, PortConfiguration, SpectrumKind,
};

use crate::error::{Result, EXIT_FAILURE, EXIT_OK};
use crate::scenario::Scenario;

/// Samples checked individually by the path-consistency and reality checks.
const MAX_CHECKED_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, outcome: if pass { Outcome::Pass } else { Outcome::Fail }, detail }
}

fn skip(name: &'static str, why: &str) -> Check {
    Check { name, outcome: Outcome::Skip, detail: why.to_string() }
}

fn fail(name: &'static str, detail: impl fmt::Display) -> Check {
    Check { name, outcome: Outcome::Fail, detail: detail.to_string() }
}

pub fn run_checks(scenario: &Scenario) -> Vec<Check> {
    let mut checks = Vec::new();

    let raw_u = match scenario.raw_unitary() {
        Ok(u) => u,
        Err(e) => {
            checks.push(fail("unitarity", e));
            return checks;
        }
    };
    let m = raw_u.nrows();
    let structure = scenario.check_structure(m);
    checks.push(match &structure {
        Ok(()) => check("scenario structure", true, format!("{} photons, {m} ports", scenario.inputs.len())),
        Err(e) => fail("scenario structure", e),
    });

    let defect = unitarity_defect(&raw_u);
    checks.push(check(
        "unitarity",
        defect < EXPLICIT_UNITARITY_TOL,
        format!("max |UU†-I| = {defect:.3e} (tolerance {EXPLICIT_UNITARITY_TOL:.0e})"),
    ));
    let u = InterferometerMatrix::from_explicit(raw_u).ok();

    if scenario.gram_override.is_none() {
        checks.push(spectra_check(scenario));
    }

    let gram = if structure.is_ok() {
        match scenario.gram() {
            Ok(g) => {
                checks.push(check(
                    "gram matrix",
                    true,
                    format!("Hermitian, unit diagonal, min eigenvalue {:.3e}", g.min_eigenvalue()),
                ));
                Some(g)
            }
            Err(e) => {
                checks.push(fail("gram matrix", e));
                None
            }
        }
    } else {
        checks.push(skip("gram matrix", "invalid scenario structure"));
        None
    };

    let (Some(u), Some(gram)) = (u, gram) else {
        for name in ["fast-path consistency", "reality and positivity", "normalization", "oracle equivalence"] {
            checks.push(skip(name, "needs a valid unitary and Gram matrix"));
        }
        return checks;
    };
    let ports = scenario.input_ports();
    let n = ports.len();

    if n <= GENERAL_MAX_N {
        let samples: Vec<_> = enumerate_samples(m, n).into_iter().take(MAX_CHECKED_SAMPLES).collect();
        checks.push(fast_path_check(&u, &ports, &samples));
        checks.push(reality_check(&u, &ports, &gram, &samples));
    } else {
        checks.push(skip("fast-path consistency", "more photons than the general path allows"));
        checks.push(skip("reality and positivity", "more photons than the general path allows"));
    }

    match build_distribution(&u, &ports, &gram) {
        Ok(dist) => {
            let total = dist.total();
            checks.push(check(
                "normalization",
                (total - 1.0).abs() < 1e-8,
                format!("total = {total:.15} over {} samples", dist.len()),
            ));
            if n <= ORACLE_MAX_N && m <= ORACLE_MAX_M {
                checks.push(match fock_oracle(&u, &ports, &gram).and_then(|o| dist.max_abs_diff(&o)) {
                    Ok(diff) => check("oracle equivalence", diff < 1e-9, format!("max |Δp| = {diff:.3e}")),
                    Err(e) => fail("oracle equivalence", e),
                });
            } else {
                checks.push(skip("oracle equivalence", "outside the Fock oracle limits"));
            }
        }
        Err(e) if e.is_infeasible() => {
            checks.push(skip("normalization", &format!("{e}")));
            checks.push(skip("oracle equivalence", "distribution infeasible"));
        }
        Err(e) => {
            checks.push(fail("normalization", e));
            checks.push(skip("oracle equivalence", "no distribution"));
        }
    }
    checks
}

fn spectra_check(scenario: &Scenario) -> Check {
    let name = "spectra";
    let spectra = match scenario.spectra() {
        Ok(s) => s,
        Err(e) => return fail(name, e),
    };
    let mut worst_norm = 0.0f64;
    let mut worst_overlap = 0.0f64;
    for a in spectra.iter().filter(|s| s.kind == SpectrumKind::GaussianPulse) {
        match a.norm_squared_quadrature() {
            Ok(v) => worst_norm = worst_norm.max((v - 1.0).abs()),
            Err(e) => return fail(name, e),
        }
        for b in spectra.iter().filter(|s| s.kind == SpectrumKind::GaussianPulse) {
            match (overlap(a, b), overlap_quadrature(a, b)) {
                (Ok(x), Ok(y)) => worst_overlap = worst_overlap.max((x - y).norm()),
                (Err(e), _) | (_, Err(e)) => return fail(name, e),
            }
        }
    }
    check(
        name,
        worst_norm < 1e-9 && worst_overlap < 1e-9,
        format!("max |∫|ξ|² - 1| = {worst_norm:.2e}, max |closed form - quadrature| = {worst_overlap:.2e}"),
    )
}

fn fast_path_check(u: &InterferometerMatrix, ports: &[usize], samples: &[Vec<usize>]) -> Check {
    let name = "fast-path consistency";
    let n = ports.len();
    let mut worst = 0.0f64;
    for occ in samples {
        let result = (|| -> multiboson::Result<f64> {
            let cfg = PortConfiguration::new(u.dim(), ports.to_vec(), occ.clone())?;
            let d = probability_distinguishable(u, &cfg)?.value
                - probability_general(u, &cfg, &GramMatrix::identity(n))?.value;
            let i = probability_identical(u, &cfg)?.value
                - probability_general(u, &cfg, &GramMatrix::all_ones(n))?.value;
            Ok(d.abs().max(i.abs()))
        })();
        match result {
            Ok(v) => worst = worst.max(v),
            Err(e) => return fail(name, e),
        }
    }
    check(name, worst < 1e-10, format!("max |Δp| = {worst:.3e} over {} samples", samples.len()))
}

fn reality_check(u: &InterferometerMatrix, ports: &[usize], gram: &GramMatrix, samples: &[Vec<usize>]) -> Check {
    let name = "reality and positivity";
    let mut worst_residual = 0.0f64;
    let mut min_value = f64::INFINITY;
    let mut ok = true;
    for occ in samples {
        let p = PortConfiguration::new(u.dim(), ports.to_vec(), occ.clone())
            .and_then(|cfg| probability_general_unpaired(u, &cfg, gram));
        match p {
            Ok(p) => {
                ok &= p.imaginary_residual < 1e-9 * p.raw_rate.max(1.0) && p.value >= -1e-10;
                worst_residual = worst_residual.max(p.imaginary_residual);
                min_value = min_value.min(p.value);
            }
            Err(e) => return fail(name, e),
        }
    }
    check(name, ok, format!("max |Im| = {worst_residual:.3e}, min p = {min_value:.3e}"))
}

pub fn print_checks(checks: &[Check], out: &mut dyn std::io::Write) -> std::io::Result<()> {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in checks {
        writeln!(out, "{}  {:width$}  {}", c.outcome, c.name, c.detail)?;
    }
    Ok(())
}

/// Exit code 0 iff no check failed.
pub fn validate(scenario_path: &Path) -> Result<i32> {
    let scenario = Scenario::load(scenario_path)?;
    let checks = run_checks(&scenario);
    print_checks(&checks, &mut std::io::stdout().lock())?;
    let failed = checks.iter().filter(|c| c.outcome == Outcome::Fail).count();
    println!("{} checks, {} failed", checks.len(), failed);
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}


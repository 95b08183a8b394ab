// SPDX-License-Identifier: Apache-2.0

//! Globally adaptive 7/15-point Gauss–Kronrod quadrature for complex-valued
//! integrands on a finite interval.

use num_complex::Complex64;

use crate::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Subinterval budget before giving up.
pub const MAX_INTERVALS: usize = 4096;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureEstimate {
    pub value: Complex64,
    pub error_estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lower: f64,
    upper: f64,
    value: Complex64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, lower: f64, upper: f64) -> Segment {
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Segment { lower, upper, value, error }
}

/// Integrates `f` over `[lower, upper]` to an absolute tolerance, bisecting
/// the subinterval with the largest error estimate until the summed estimate
/// drops below `abs_tol`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    lower: f64,
    upper: f64,
    abs_tol: f64,
) -> Result<QuadratureEstimate> {
    let mut segments = vec![kronrod15(&f, lower, upper)];
    loop {
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= abs_tol {
            let value = segments.iter().map(|s| s.value).sum();
            return Ok(QuadratureEstimate {
                value,
                error_estimate: error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNonConvergence {
                lower,
                upper,
                error_estimate: error,
                tolerance: abs_tol,
                intervals: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("non-empty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.lower + s.upper);
        segments.push(kronrod15(&f, s.lower, mid));
        segments.push(kronrod15(&f, mid, s.upper));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_exactly() {
        let r = integrate(|x| Complex64::new(x.powi(5), 3.0 * x * x), -1.0, 2.0, 1e-13).unwrap();
        assert!((r.value.re - (64.0 - 1.0) / 6.0).abs() < 1e-12);
        assert!((r.value.im - 9.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_oscillatory_gaussian() {
        // ∫ exp(-x²) e^{ix} dx over the real line = √π e^{-1/4}
        let r = integrate(|x| Complex64::new(0.0, x).exp() * (-x * x).exp(), -12.0, 12.0, 1e-12)
            .unwrap();
        let exact = std::f64::consts::PI.sqrt() * (-0.25f64).exp();
        assert!((r.value.re - exact).abs() < 1e-12);
        assert!(r.value.im.abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        // divergent at the origin
        let err = integrate(|x| Complex64::new(1.0 / (x * x), 0.0), 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonConvergence { .. }));
    }
}

//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands
//! on a finite interval. The panel with the largest error estimate is bisected
//! until the summed estimate drops below the absolute tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Result, ThetaError};

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
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

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
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
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, starting from
/// `initial_panels` equal panels and never exceeding `max_panels`.
pub fn integrate<F>(
    f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    tol: f64,
    max_panels: usize,
) -> Result<QuadOutcome>
where
    F: Fn(f64) -> Complex64,
{
    let initial = initial_panels.clamp(1, max_panels.max(1));
    let width = (b - a) / initial as f64;
    let mut heap = BinaryHeap::with_capacity(max_panels.min(1 << 16));
    for k in 0..initial {
        let lo = a + width * k as f64;
        let hi = if k + 1 == initial { b } else { lo + width };
        heap.push(kronrod_panel(&f, lo, hi));
    }
    let mut evaluations = 15 * initial;
    let min_width = 1e-13 * (b - a).abs().max(1e-300);

    loop {
        let total_err: f64 = heap.iter().map(|p| p.error).sum();
        if !total_err.is_finite() {
            return Err(ThetaError::NonConvergence {
                panels: heap.len(),
                error_estimate: total_err,
            });
        }
        if total_err <= tol {
            let value = heap.iter().fold(Complex64::new(0.0, 0.0), |s, p| s + p.value);
            return Ok(QuadOutcome {
                value,
                error_estimate: total_err,
                panels: heap.len(),
                evaluations,
            });
        }
        if heap.len() >= max_panels {
            return Err(ThetaError::NonConvergence {
                panels: heap.len(),
                error_estimate: total_err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.b - worst.a < min_width {
            return Err(ThetaError::NonConvergence {
                panels: heap.len() + 1,
                error_estimate: total_err,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod_panel(&f, worst.a, mid));
        heap.push(kronrod_panel(&f, mid, worst.b));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        // K15 integrates degree ≤ 22 exactly
        let out = integrate(|x| Complex64::new(x.powi(9), -x.powi(4)), 0.0, 2.0, 1, 1e-12, 8).unwrap();
        assert!((out.value.re - 2f64.powi(10) / 10.0).abs() < 1e-11);
        assert!((out.value.im + 2f64.powi(5) / 5.0).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_refines() {
        // ∫_{-1}^{1} 1/(x² + δ²) dx = (2/δ) atan(1/δ)
        let d: f64 = 1e-3;
        let out = integrate(|x| Complex64::new(1.0 / (x * x + d * d), 0.0), -1.0, 1.0, 2, 1e-8, 4096).unwrap();
        let want = 2.0 / d * (1.0 / d).atan();
        assert!((out.value.re - want).abs() < 1e-8, "{} vs {want}", out.value.re);
        assert!(out.panels > 10);
    }

    #[test]
    fn panel_limit_reports_non_convergence() {
        let err = integrate(|x| Complex64::new((1.0 / (x + 1e-9)).sin(), 0.0), 0.0, 1.0, 1, 1e-14, 16).unwrap_err();
        assert!(matches!(err, ThetaError::NonConvergence { .. }));
    }
}

//! Scalar helpers shared by every evaluation route: the principal logarithm,
//! compensated summation, log-domain accumulation and a real log-gamma.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, ThetaError};

pub type ComplexValue = Complex64;

/// `w = e^{log_abs} · e^{i·phase}` with `phase ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    pub log_abs: f64,
    pub phase: f64,
}

impl LogMagnitude {
    pub fn new(log_abs: f64, phase: f64) -> Self {
        LogMagnitude {
            log_abs,
            phase: normalize_phase(phase),
        }
    }

    /// `None` for `w = 0`.
    pub fn from_complex(w: ComplexValue) -> Option<Self> {
        if w.re == 0.0 && w.im == 0.0 {
            return None;
        }
        Some(LogMagnitude::new(w.norm().ln(), w.im.atan2(w.re)))
    }

    pub fn to_complex(self) -> ComplexValue {
        Complex64::from_polar(self.log_abs.exp(), self.phase)
    }

    /// `wⁿ`, with the phase reduced after multiplication.
    pub fn powu(self, n: u64) -> LogMagnitude {
        let nf = n as f64;
        LogMagnitude::new(self.log_abs * nf, (self.phase * nf).rem_euclid(2.0 * PI))
    }
}

impl std::ops::Mul for LogMagnitude {
    type Output = LogMagnitude;

    fn mul(self, other: LogMagnitude) -> LogMagnitude {
        LogMagnitude::new(self.log_abs + other.log_abs, self.phase + other.phase)
    }
}

/// Maps any finite angle into `(−π, π]`.
pub fn normalize_phase(phase: f64) -> f64 {
    if phase > -PI && phase <= PI {
        return phase;
    }
    let mut p = phase.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Principal logarithm with `Im ∈ (−π, π]`; the negative real axis (including a
/// signed-zero imaginary part) maps to phase `+π`.
pub fn principal_log(z: ComplexValue) -> Result<ComplexValue> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(ThetaError::domain("principal_log", "z = 0"));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(ThetaError::domain("principal_log", "non-finite argument"));
    }
    let mut phase = z.im.atan2(z.re);
    if phase <= -PI {
        phase = PI;
    }
    Ok(Complex64::new(z.norm().ln(), phase))
}

/// Principal argument in `(−π, π]`; 0 for `z = 0`.
pub fn principal_arg(z: ComplexValue) -> f64 {
    let phase = z.im.atan2(z.re);
    if phase <= -PI {
        PI
    } else {
        phase
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

#[inline]
fn neumaier(sum: &mut f64, carry: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *carry += (*sum - t) + x;
    } else {
        *carry += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: ComplexValue) {
        neumaier(&mut self.sum.re, &mut self.carry.re, x.re);
        neumaier(&mut self.sum.im, &mut self.carry.im, x.im);
    }

    pub fn value(&self) -> ComplexValue {
        self.sum + self.carry
    }
}

pub fn compensated_sum<I>(terms: I) -> ComplexValue
where
    I: IntoIterator<Item = ComplexValue>,
{
    let mut acc = CompensatedSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// `ln Σ e^{t_k}`; the empty sequence yields `−∞`.
pub fn log_sum_exp(log_terms: &[f64]) -> f64 {
    let max = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || !max.is_finite() {
        return max;
    }
    let s: f64 = log_terms.iter().map(|&t| (t - max).exp()).sum();
    max + s.ln()
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for real `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(ThetaError::domain("log_gamma", format!("x = {x} is not > 0")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let rest = lanczos_ln_gamma(1.0 - x);
        return Ok((PI / (PI * x).sin()).ln() - rest);
    }
    Ok(lanczos_ln_gamma(x))
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn principal_log_examples() {
        assert_eq!(principal_log(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let li = principal_log(Complex64::i()).unwrap();
        assert!(li.re.abs() < 1e-16 && (li.im - PI / 2.0).abs() < 1e-16);
        let e_pi = 23.140_692_632_779_267;
        let l = principal_log(Complex64::new(-e_pi, 0.0)).unwrap();
        assert!((l.re - PI).abs() < 1e-15);
        assert_eq!(l.im, PI);
        // signed zero on the cut still carries +π
        let l = principal_log(Complex64::new(-e_pi, -0.0)).unwrap();
        assert_eq!(l.im, PI);
        assert!(principal_log(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn compensated_sum_examples() {
        assert_eq!(compensated_sum(Vec::new()), Complex64::new(0.0, 0.0));
        let v = compensated_sum([1.0, -1.0, 1e-16].map(|x| Complex64::new(x, 0.0)));
        assert_eq!(v.re, 1e-16);
        let v = compensated_sum(std::iter::repeat_n(Complex64::new(0.1, 0.0), 1_000_000));
        assert!((v.re - 1e5).abs() < 1e-9);
    }

    #[test]
    fn log_gamma_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        // integer factorial oracle: Γ(11) = 10!
        let fact: u64 = (1..=10).product();
        let want = (fact as f64).ln();
        assert!(((log_gamma(11.0).unwrap() - want) / want).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_against_independent_values() {
        // Γ(1/2) = √π
        let v = log_gamma(0.5).unwrap();
        assert!((v - 0.5 * PI.ln()).abs() < 1e-14);
        // Stirling series with five correction terms at x = 10⁴ (truncation error < 1e-30)
        let x: f64 = 1e4;
        let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3))
            + 1.0 / (1260.0 * x.powi(5));
        let got = log_gamma(x).unwrap();
        assert!(((got - stirling) / stirling).abs() < 1e-12, "{got} vs {stirling}");
        // 20! exactly representable up to rounding
        let fact: u64 = (1..=20).product();
        let want = (fact as f64).ln();
        assert!(((log_gamma(21.0).unwrap() - want) / want).abs() < 1e-13);
        // reflection branch: Γ(0.25) = 3.6256099082219083119...
        let v = log_gamma(0.25).unwrap();
        assert!((v - 3.625_609_908_221_908_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_sum_exp_examples() {
        assert_eq!(log_sum_exp(&[0.0]), 0.0);
        let ln2 = 2f64.ln();
        assert!((log_sum_exp(&[ln2, ln2]) - 4f64.ln()).abs() < 1e-15);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + ln2)).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn log_magnitude_round_trip() {
        let w = Complex64::new(-3.0, 4.0);
        let lm = LogMagnitude::from_complex(w).unwrap();
        assert!((lm.to_complex() - w).norm() < 1e-14);
        let cube = lm.powu(3).to_complex();
        assert!((cube - w * w * w).norm() / 125.0 < 1e-14);
        assert!(LogMagnitude::from_complex(Complex64::new(0.0, 0.0)).is_none());
        assert!(LogMagnitude::new(0.0, 7.0 * PI).phase <= PI);
    }

    fn annulus_point() -> impl Strategy<Value = Complex64> {
        (-6.0f64..6.0, -PI..PI).prop_map(|(lr, phi)| Complex64::from_polar(lr.exp(), phi))
    }

    proptest! {
        #[test]
        fn principal_log_branch_and_inverse(z in annulus_point()) {
            let l = principal_log(z).unwrap();
            prop_assert!(l.im > -PI && l.im <= PI);
            let back = l.exp();
            prop_assert!((back - z).norm() <= 1e-14 * z.norm());
        }

        // Inputs sit on a dyadic grid and shifts are integers, so t + c is exact; the
        // remaining error is the final rounding of a result of size |c|.
        #[test]
        fn log_sum_exp_shift_invariance(
            raw in proptest::collection::vec(-4096i64..4096, 1..20),
            shift in -1_000_000i64..1_000_000,
        ) {
            let t: Vec<f64> = raw.iter().map(|&k| k as f64 / 256.0).collect();
            let c = shift as f64;
            let shifted: Vec<f64> = t.iter().map(|x| x + c).collect();
            let lhs = log_sum_exp(&shifted);
            let rhs = log_sum_exp(&t) + c;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * c.abs().max(1.0), "{lhs} {rhs}");
        }

        #[test]
        fn log_gamma_recurrence(x in 0.5f64..100.0) {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }
}

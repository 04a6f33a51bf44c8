//! Direct evaluation of the regularized sums `Σ γ_n(ε) zⁿ`.
//!
//! Every sum is truncated with a certified tail bound. Before summing, the
//! magnitude of the largest term is predicted; if it exceeds the configured
//! budget the evaluation is refused with [`ThetaError::InfeasibleCancellation`]
//! instead of returning a number dominated by rounding error.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Result, ThetaError};
use crate::numerics::{log_gamma, principal_arg, CompensatedSum, ComplexValue, LogMagnitude};
use crate::quadrature;

/// Minimum of Γ on the positive axis, attained at x ≈ 1.4616.
const GAMMA_MIN: f64 = 0.885_603_194_410_888_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SummingMethod {
    /// `e^{−εn²}`
    Theta,
    /// Le Roy: `Γ(1 + (1−ε)n) / Γ(1 + n)`
    GammaRatio,
    /// `e^{−εn ln n}`, with `γ_0 = 1`
    Lindelof,
    /// `1 / Γ(1 + εn)`
    MittagLeffler,
}

impl SummingMethod {
    pub const ALL: [SummingMethod; 4] = [
        SummingMethod::Theta,
        SummingMethod::GammaRatio,
        SummingMethod::Lindelof,
        SummingMethod::MittagLeffler,
    ];

    pub const CLASSICAL: [SummingMethod; 3] = [
        SummingMethod::GammaRatio,
        SummingMethod::Lindelof,
        SummingMethod::MittagLeffler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SummingMethod::Theta => "theta",
            SummingMethod::GammaRatio => "gamma-ratio",
            SummingMethod::Lindelof => "lindelof",
            SummingMethod::MittagLeffler => "mittag-leffler",
        }
    }

    /// `sup |γ_n(ε)|` over `0 < ε ≤ 1`, `n ≥ 0`.
    pub fn uniform_bound(self) -> f64 {
        match self {
            SummingMethod::MittagLeffler => 1.0 / GAMMA_MIN,
            _ => 1.0,
        }
    }

    /// `ln γ_n(ε)`.
    ///
    /// The Le Roy sequence uses `t = 1 − ε` (clamped at 0 for `ε ≥ 1`), so that
    /// every method tends to 1 as `ε → 0⁺`.
    pub fn log_coefficient(self, n: u64, eps: f64) -> f64 {
        let nf = n as f64;
        match self {
            SummingMethod::Theta => -eps * nf * nf,
            SummingMethod::GammaRatio => {
                if n == 0 {
                    return 0.0;
                }
                let t = (1.0 - eps).max(0.0);
                ln_gamma_pos(1.0 + t * nf) - ln_gamma_pos(1.0 + nf)
            }
            SummingMethod::Lindelof => {
                if n <= 1 {
                    0.0
                } else {
                    -eps * nf * nf.ln()
                }
            }
            SummingMethod::MittagLeffler => -ln_gamma_pos(1.0 + eps * nf),
        }
    }
}

impl fmt::Display for SummingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SummingMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "theta" => Ok(SummingMethod::Theta),
            "gamma-ratio" | "gammaratio" | "leroy" | "le-roy" => Ok(SummingMethod::GammaRatio),
            "lindelof" | "lindeloef" => Ok(SummingMethod::Lindelof),
            "mittag-leffler" | "mittagleffler" | "ml" => Ok(SummingMethod::MittagLeffler),
            other => Err(format!("unknown summing method '{other}'")),
        }
    }
}

fn ln_gamma_pos(x: f64) -> f64 {
    log_gamma(x).expect("argument is ≥ 1")
}

/// `γ_n(ε)` for the given method.
pub fn gamma_coefficient(method: SummingMethod, n: u64, eps: f64) -> f64 {
    match method {
        SummingMethod::Theta => theta_weight(n, eps),
        _ => method.log_coefficient(n, eps).exp(),
    }
}

/// `e^{−εn²}` with the product `εn²` carried to double-double precision.
fn theta_weight(n: u64, eps: f64) -> f64 {
    let nn = (n as f64) * (n as f64);
    let p = eps * nn;
    let lo = eps.mul_add(nn, -p);
    (-p).exp() * (1.0 - lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalStrategy {
    DirectSeries,
    DualTheta,
    Contour,
}

impl EvalStrategy {
    pub fn name(self) -> &'static str {
        match self {
            EvalStrategy::DirectSeries => "series",
            EvalStrategy::DualTheta => "dual",
            EvalStrategy::Contour => "contour",
        }
    }
}

impl fmt::Display for EvalStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: ComplexValue,
    pub abs_error_estimate: f64,
    pub strategy: EvalStrategy,
    pub terms_or_nodes_used: usize,
    /// Largest `ln |γ_n(ε) zⁿ|` actually summed.
    pub peak_log_term: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub tol: f64,
    pub peak_log_budget: f64,
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tol: 1e-17,
            peak_log_budget: 1e12f64.ln(),
            max_terms: 10_000_000,
        }
    }
}

impl TruncationPolicy {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.peak_log_budget > 0.0) || self.max_terms == 0 {
            return Err(ThetaError::domain("TruncationPolicy", "tol, peak_log_budget and max_terms must be positive"));
        }
        Ok(())
    }
}

fn check_eps(op: &'static str, eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(ThetaError::domain(op, format!("eps = {eps} is not > 0")));
    }
    Ok(())
}

fn check_finite(op: &'static str, z: ComplexValue) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(ThetaError::domain(op, "non-finite z"));
    }
    Ok(())
}

/// Index of the largest term and its log-magnitude, by scanning forward until the
/// log-terms stop increasing (the sequences are log-concave in n).
fn scan_peak(method: SummingMethod, ln_abs_z: f64, eps: f64, max_terms: usize) -> Result<(u64, f64)> {
    let log_term = |n: u64| method.log_coefficient(n, eps) + n as f64 * ln_abs_z;
    let mut n = 0u64;
    let mut current = log_term(0);
    loop {
        let next = log_term(n + 1);
        if next <= current {
            return Ok((n, current));
        }
        n += 1;
        current = next;
        if n as usize >= max_terms {
            return Err(ThetaError::TermLimit { max_terms });
        }
    }
}

/// Shared series kernel: `Σ_{n ≥ start} γ_n(ε) wⁿ`.
fn sum_series(
    w: ComplexValue,
    eps: f64,
    method: SummingMethod,
    policy: &TruncationPolicy,
    start: u64,
) -> Result<EvalResult> {
    policy.validate()?;
    if w.re == 0.0 && w.im == 0.0 {
        let value = if start == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        return Ok(EvalResult {
            value,
            abs_error_estimate: 0.0,
            strategy: EvalStrategy::DirectSeries,
            terms_or_nodes_used: 1,
            peak_log_term: 0.0,
        });
    }
    let ln_abs = w.norm().ln();
    let (n_star, predicted_peak) = match method {
        SummingMethod::Theta => {
            if ln_abs > 0.0 {
                (ln_abs / (2.0 * eps), ln_abs * ln_abs / (4.0 * eps))
            } else {
                (0.0, 0.0)
            }
        }
        _ => {
            let (n, peak) = scan_peak(method, ln_abs, eps, policy.max_terms)?;
            (n as f64, peak)
        }
    };
    if predicted_peak > policy.peak_log_budget {
        return Err(ThetaError::InfeasibleCancellation {
            peak_log: predicted_peak,
            budget: policy.peak_log_budget,
        });
    }

    let polar = LogMagnitude::from_complex(w).expect("w ≠ 0");
    let term_at = |n: u64, log_coef: f64| -> ComplexValue {
        let log_pow = n as f64 * ln_abs;
        if log_pow.abs() < 600.0 && log_coef > -600.0 {
            let coef = match method {
                SummingMethod::Theta => theta_weight(n, eps),
                _ => log_coef.exp(),
            };
            coef * w.powi(n as i32)
        } else {
            (LogMagnitude::new(log_coef, 0.0) * polar.powu(n)).to_complex()
        }
    };

    let mut acc = CompensatedSum::new();
    // Σ |term| weighted by the relative error of the term: products and the final
    // exponential contribute a few ulps, and log-gamma based coefficients carry the
    // absolute rounding of ln γ_n (≈ ulp(|ln γ_n|)) into a relative error.
    let mut abs_sum = 0.0;
    let mut peak_seen = f64::NEG_INFINITY;
    let mut n = start;
    let mut used = 0usize;
    let tail = loop {
        let log_coef = method.log_coefficient(n, eps);
        let log_mag = log_coef + n as f64 * ln_abs;
        let term = term_at(n, log_coef);
        acc.add(term);
        let mag = term.norm();
        let coef_err = match method {
            SummingMethod::Theta => 0.0,
            _ => 4.0 * (1.0 + log_coef.abs() + n as f64 * ln_abs.abs()),
        };
        abs_sum += mag * (1.0 + coef_err / 8.0);
        peak_seen = peak_seen.max(log_mag);
        used += 1;
        if n as f64 > n_star && mag < policy.tol {
            let ratio = (method.log_coefficient(n + 1, eps) - log_coef + ln_abs).exp();
            if ratio < 1.0 {
                break mag * ratio / (1.0 - ratio);
            }
        }
        if used >= policy.max_terms {
            return Err(ThetaError::TermLimit { max_terms: policy.max_terms });
        }
        n += 1;
    };

    let rounding = 8.0 * f64::EPSILON * abs_sum;
    Ok(EvalResult {
        value: acc.value(),
        abs_error_estimate: tail + rounding,
        strategy: EvalStrategy::DirectSeries,
        terms_or_nodes_used: used,
        peak_log_term: peak_seen,
    })
}

/// `Σ_{n ≥ 0} γ_n(ε) zⁿ` by truncated summation.
pub fn eval_direct(
    z: ComplexValue,
    eps: f64,
    method: SummingMethod,
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    check_eps("eval_direct", eps)?;
    check_finite("eval_direct", z)?;
    sum_series(z, eps, method, policy, 0)
}

/// `Σ_{m ≥ 1} e^{−εm²} z^{−m}`.
pub fn negative_tail(z: ComplexValue, eps: f64, policy: &TruncationPolicy) -> Result<EvalResult> {
    check_eps("negative_tail", eps)?;
    check_finite("negative_tail", z)?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(ThetaError::domain("negative_tail", "z = 0"));
    }
    sum_series(z.inv(), eps, SummingMethod::Theta, policy, 1)
}

/// Bilateral theta series `h_ε(z) = Σ_{n ∈ ℤ} e^{−εn²} zⁿ`.
pub fn eval_bilateral(z: ComplexValue, eps: f64, policy: &TruncationPolicy) -> Result<EvalResult> {
    check_eps("eval_bilateral", eps)?;
    check_finite("eval_bilateral", z)?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(ThetaError::domain("eval_bilateral", "z = 0"));
    }
    let pos = eval_direct(z, eps, SummingMethod::Theta, policy)?;
    let neg = negative_tail(z, eps, policy)?;
    Ok(EvalResult {
        value: pos.value + neg.value,
        abs_error_estimate: pos.abs_error_estimate + neg.abs_error_estimate,
        strategy: EvalStrategy::DirectSeries,
        terms_or_nodes_used: pos.terms_or_nodes_used + neg.terms_or_nodes_used,
        peak_log_term: pos.peak_log_term.max(neg.peak_log_term),
    })
}

/// `ln ln M(r) / ln r` for each radius, where `M(r) = f_ε(r)` (all Taylor
/// coefficients are positive) is accumulated in the log domain.
pub fn order_probe(eps: f64, radii: &[f64]) -> Vec<f64> {
    radii
        .iter()
        .map(|&r| {
            let ln_r = r.ln();
            let n_star = (ln_r / (2.0 * eps)).max(0.0);
            let n_end = (n_star + (60.0 / eps).sqrt() + 10.0).ceil() as u64;
            let logs: Vec<f64> = (0..=n_end)
                .map(|n| {
                    let nf = n as f64;
                    nf * ln_r - eps * nf * nf
                })
                .collect();
            crate::numerics::log_sum_exp(&logs).ln() / ln_r
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionOutcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionWitness {
    pub n: u64,
    pub eps: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub outcome: ConditionOutcome,
    pub witness: Option<ConditionWitness>,
    pub detail: String,
}

/// Finite-scale evidence for the three summing-sequence conditions:
/// (a) uniform boundedness, (b) `γ_n(ε) → 1` as `ε → 0`, (c) `|γ_n(ε)|^{1/n} → 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionsReport {
    pub bounded: ConditionCheck,
    pub pointwise_to_one: ConditionCheck,
    pub root_decay: ConditionCheck,
}

impl ConditionsReport {
    pub fn all_pass(&self) -> bool {
        [&self.bounded, &self.pointwise_to_one, &self.root_decay]
            .iter()
            .all(|c| c.outcome == ConditionOutcome::Pass)
    }
}

pub fn check_summing_conditions(method: SummingMethod, eps: f64, n_max: u64) -> ConditionsReport {
    // (a) sup over ε ∈ {eps·2^{-k}}, n ≤ n_max
    let bound = method.uniform_bound();
    let mut worst = ConditionWitness { n: 0, eps, value: f64::NEG_INFINITY };
    for k in 0..=20 {
        let e = eps * 0.5f64.powi(k);
        for n in 0..=n_max {
            let v = gamma_coefficient(method, n, e);
            if v > worst.value {
                worst = ConditionWitness { n, eps: e, value: v };
            }
        }
    }
    let bounded = ConditionCheck {
        outcome: if worst.value <= bound * (1.0 + 1e-12) { ConditionOutcome::Pass } else { ConditionOutcome::Fail },
        witness: Some(worst),
        detail: format!("sup γ = {:.6} against bound {:.6}", worst.value, bound),
    };

    // (b) for n ≤ 10, |γ_n(ε·10^{-k}) − 1| non-increasing over k = 4..8 and below 1e-6 at k = 8
    let mut b_ok = true;
    let mut b_witness = ConditionWitness { n: 0, eps, value: 0.0 };
    for n in 0..=10u64 {
        let mut prev = f64::INFINITY;
        for k in 0..=8 {
            let e = eps * 10f64.powi(-k);
            let dev = (gamma_coefficient(method, n, e) - 1.0).abs();
            if k > 4 && dev > prev * (1.0 + 1e-9) + 1e-15 {
                b_ok = false;
                b_witness = ConditionWitness { n, eps: e, value: dev };
            }
            prev = dev;
            if k == 8 {
                if dev >= 1e-6 {
                    b_ok = false;
                    b_witness = ConditionWitness { n, eps: e, value: dev };
                } else if b_ok && dev > b_witness.value {
                    b_witness = ConditionWitness { n, eps: e, value: dev };
                }
            }
        }
    }
    let pointwise_to_one = ConditionCheck {
        outcome: if b_ok { ConditionOutcome::Pass } else { ConditionOutcome::Fail },
        witness: Some(b_witness),
        detail: format!("max |γ_n − 1| at smallest ε: {:.3e}", b_witness.value),
    };

    // (c) ln γ_n / n decreasing over [n_max/2, n_max] and γ^{1/n} < 1/2 at n_max
    let root_decay = if n_max < 100 {
        ConditionCheck {
            outcome: ConditionOutcome::Inconclusive,
            witness: None,
            detail: format!("n_max = {n_max} is below the 100-term minimum"),
        }
    } else {
        let log_root = |n: u64| method.log_coefficient(n, eps) / n as f64;
        let lo = (n_max / 2).max(1);
        let mut decreasing = true;
        let mut w = None;
        let mut prev = log_root(lo);
        for n in lo + 1..=n_max {
            let cur = log_root(n);
            if cur > prev {
                decreasing = false;
                w = Some(ConditionWitness { n, eps, value: cur.exp() });
                break;
            }
            prev = cur;
        }
        let final_root = log_root(n_max).exp();
        let below = final_root < 0.5;
        ConditionCheck {
            outcome: if decreasing && below { ConditionOutcome::Pass } else { ConditionOutcome::Fail },
            witness: w.or(Some(ConditionWitness { n: n_max, eps, value: final_root })),
            detail: format!("γ_n^(1/n) at n = {n_max}: {final_root:.6}"),
        }
    };

    ConditionsReport { bounded, pointwise_to_one, root_decay }
}

/// `E_α(z) = Σ zⁿ / Γ(1 + αn)` for `0 < α < 1` through the collapsed Hankel contour
///
/// ```text
/// E_α(z) = −(z sin απ / απ) ∫_0^∞ e^{−ρ^{1/α}} / (ρ² − 2ρz cos απ + z²) dρ
///          [+ e^{z^{1/α}} / α  when |arg z| < απ]
/// ```
///
/// which has no cancellation for the parameters where the power series is
/// infeasible.
pub fn eval_mittag_leffler_integral(z: ComplexValue, alpha: f64, tol: f64) -> Result<EvalResult> {
    check_finite("eval_mittag_leffler_integral", z)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ThetaError::domain("eval_mittag_leffler_integral", format!("alpha = {alpha} outside (0, 1)")));
    }
    let r = z.norm();
    if r == 0.0 {
        return Err(ThetaError::domain("eval_mittag_leffler_integral", "z = 0"));
    }
    let phi = principal_arg(z);
    let ray = alpha * PI;
    // distances from z to the two rays ρe^{±iαπ}
    let ray_dist = |angle: f64| {
        let d = phi - angle;
        if d.cos() <= 0.0 { r } else { r * d.sin().abs() }
    };
    let d_plus = ray_dist(ray);
    let d_minus = ray_dist(-ray);
    let near = d_plus.min(d_minus);
    if near < 1e-6 * r.max(1.0) {
        return Err(ThetaError::MarginTooSmall { distance: near });
    }

    let (sin_a, cos_a) = ray.sin_cos();
    let prefactor = -z * sin_a / ray;
    let z2 = z * z;
    let integrand = |rho: f64| -> Complex64 {
        let decay = (-rho.powf(1.0 / alpha)).exp();
        if decay == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let den = Complex64::new(rho * rho, 0.0) - 2.0 * rho * cos_a * z + z2;
        decay / den
    };

    let cutoff_log = (1.0 / tol).ln() + 10.0;
    let rho_max = cutoff_log.powf(alpha);
    let scale = prefactor.norm();
    let tail = scale * alpha * cutoff_log.powf(alpha - 1.0) * (-cutoff_log).exp() / (d_plus * d_minus);
    let inner_tol = tol / scale.max(1e-300);
    let out = quadrature::integrate(integrand, 0.0, rho_max, 16, inner_tol, 1 << 14)?;

    let mut value = prefactor * out.value;
    if phi.abs() < ray {
        let pole = (z.ln() / alpha).exp().exp() / alpha;
        if !(pole.re.is_finite() && pole.im.is_finite()) {
            return Err(ThetaError::Overflow { op: "eval_mittag_leffler_integral" });
        }
        value += pole;
    }
    Ok(EvalResult {
        value,
        abs_error_estimate: scale * out.error_estimate + tail + 16.0 * f64::EPSILON * value.norm(),
        strategy: EvalStrategy::Contour,
        terms_or_nodes_used: out.evaluations,
        peak_log_term: f64::NAN,
    })
}

/// Direct summation. For the Mittag-Leffler method with `ε < 1` the integral
/// representation is used instead whenever the series is infeasible or its error
/// estimate exceeds `10⁻¹⁰ · max(1, |value|)` and the integral does better.
pub fn eval_summing(
    z: ComplexValue,
    eps: f64,
    method: SummingMethod,
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    let direct = eval_direct(z, eps, method, policy);
    if method != SummingMethod::MittagLeffler || eps >= 1.0 {
        return direct;
    }
    let integral = || eval_mittag_leffler_integral(z, eps, policy.tol.max(1e-15));
    match direct {
        Err(ThetaError::InfeasibleCancellation { .. }) => integral(),
        Ok(d) if d.abs_error_estimate > 1e-10 * d.value.norm().max(1.0) => match integral() {
            Ok(i) if i.abs_error_estimate < d.abs_error_estimate => Ok(i),
            _ => Ok(d),
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Plain partial sum Σ_{n<N} e^{−εn²} zⁿ, accumulated in the naive order.
    fn brute_theta(z: Complex64, eps: f64, range: std::ops::Range<i64>) -> Complex64 {
        range
            .map(|n| (-eps * (n * n) as f64).exp() * z.powf(n as f64))
            .fold(c(0.0, 0.0), |a, b| a + b)
    }

    #[test]
    fn coefficient_examples() {
        for eps in [0.01, 0.3, 1.0, 4.0] {
            assert_eq!(gamma_coefficient(SummingMethod::Theta, 0, eps), 1.0);
            assert_eq!(gamma_coefficient(SummingMethod::Lindelof, 1, eps), 1.0);
            assert_eq!(gamma_coefficient(SummingMethod::Lindelof, 0, eps), 1.0);
        }
        // Le Roy tends to 1 as ε → 0 for every n
        for n in [0u64, 1, 5, 40] {
            let g = gamma_coefficient(SummingMethod::GammaRatio, n, 1e-12);
            assert!((g - 1.0).abs() < 1e-8, "n = {n}: {g}");
        }
        // and at ε = 1 it is 1/n!
        let g = gamma_coefficient(SummingMethod::GammaRatio, 5, 1.0);
        assert!((g - 1.0 / 120.0).abs() < 1e-15);
        // Mittag-Leffler with εn = 1: 1/Γ(2) = 1
        assert!((gamma_coefficient(SummingMethod::MittagLeffler, 10, 0.1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn condition_c_closed_form_for_theta() {
        for n in 1..200u64 {
            for eps in [0.001, 0.1, 0.7] {
                let g = gamma_coefficient(SummingMethod::Theta, n, eps);
                let root = g.powf(1.0 / n as f64);
                let want = (-eps * n as f64).exp();
                if g.is_normal() {
                    assert!((root - want).abs() <= 1e-14, "n = {n} eps = {eps}");
                }
            }
        }
    }

    #[test]
    fn summing_conditions_examples() {
        let r = check_summing_conditions(SummingMethod::Theta, 0.1, 10_000);
        assert!(r.all_pass(), "{r:?}");
        let r = check_summing_conditions(SummingMethod::Theta, 0.1, 1);
        assert_eq!(r.root_decay.outcome, ConditionOutcome::Inconclusive);

        // Mittag-Leffler: γ_n^{1/n} ~ (e/(εn))^ε decays slowly; at n = 10⁴ the root
        // is Γ(1001)^{-1/10⁴} ≈ 0.554, and it first drops below 1/2 near n ≈ 2.8·10⁴.
        let r = check_summing_conditions(SummingMethod::MittagLeffler, 0.1, 10_000);
        assert_eq!(r.bounded.outcome, ConditionOutcome::Pass);
        assert_eq!(r.pointwise_to_one.outcome, ConditionOutcome::Pass);
        assert_eq!(r.root_decay.outcome, ConditionOutcome::Fail);
        let root = r.root_decay.witness.unwrap().value;
        let oracle = (-log_gamma(1001.0).unwrap() / 10_000.0).exp();
        assert!((root - oracle).abs() < 1e-12 && (root - 0.5537).abs() < 1e-3);
        let r = check_summing_conditions(SummingMethod::MittagLeffler, 0.1, 50_000);
        assert!(r.all_pass(), "{r:?}");

        for m in [SummingMethod::GammaRatio, SummingMethod::Lindelof] {
            let r = check_summing_conditions(m, 0.1, 10_000);
            assert!(r.all_pass(), "{m}: {r:?}");
        }
    }

    #[test]
    fn direct_at_origin() {
        for m in SummingMethod::ALL {
            let r = eval_direct(c(0.0, 0.0), 0.37, m, &TruncationPolicy::default()).unwrap();
            assert_eq!(r.value, c(1.0, 0.0));
        }
    }

    #[test]
    fn direct_half_matches_brute_force() {
        let z = c(0.5, 0.0);
        let r = eval_direct(z, 0.01, SummingMethod::Theta, &TruncationPolicy::default()).unwrap();
        let oracle = brute_theta(z, 0.01, 0..100_000);
        assert!((r.value - oracle).norm() <= 1e-12);
        // f_ε(1/2) − 2 ≈ −ε Σ n² 2^{−n} = −6ε to first order; the actual gap is 0.0537.
        assert!((r.value.re - 2.0 + 0.0537).abs() < 1e-3, "{}", r.value);
        assert!(r.abs_error_estimate < 1e-13);
    }

    #[test]
    fn direct_refuses_large_peak() {
        let err = eval_direct(c(-20.0, 0.0), 0.01, SummingMethod::Theta, &TruncationPolicy::default()).unwrap_err();
        match err {
            ThetaError::InfeasibleCancellation { peak_log, budget } => {
                assert!((peak_log - 20f64.ln().powi(2) / 0.04).abs() < 1e-9);
                assert!((peak_log - 224.3).abs() < 0.1);
                assert!((budget - 27.631).abs() < 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bilateral_at_one() {
        let r = eval_bilateral(c(1.0, 0.0), 1.0, &TruncationPolicy::default()).unwrap();
        let oracle = 1.0 + 2.0 * (1..40).map(|m| (-((m * m) as f64)).exp()).sum::<f64>();
        assert!((r.value - c(oracle, 0.0)).norm() < 1e-15);
        assert_eq!(r.value.im, 0.0);
    }

    #[test]
    fn bilateral_symmetry_example() {
        let p = TruncationPolicy::default();
        let z = c(2.0, 1.0);
        let a = eval_bilateral(z, 0.3, &p).unwrap();
        let b = eval_bilateral(z.inv(), 0.3, &p).unwrap();
        assert!((a.value - b.value).norm() <= 1e-10);
    }

    #[test]
    fn bilateral_is_direct_plus_tail() {
        let p = TruncationPolicy::default();
        let z = c(0.5, 0.0);
        let h = eval_bilateral(z, 0.5, &p).unwrap();
        let f = eval_direct(z, 0.5, SummingMethod::Theta, &p).unwrap();
        let t = negative_tail(z, 0.5, &p).unwrap();
        assert_eq!(h.value, f.value + t.value);
    }

    #[test]
    fn negative_tail_examples() {
        let p = TruncationPolicy::default();
        // z = 2: tail → Σ 2^{-m} = 1
        let mut prev = f64::INFINITY;
        for eps in [0.1, 0.01, 0.001, 1e-4] {
            let v = negative_tail(c(2.0, 0.0), eps, &p).unwrap().value;
            let err = (v - c(1.0, 0.0)).norm();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-3);

        let z = c(-20.0, 0.0);
        let v = negative_tail(z, 0.001, &p).unwrap().value;
        let oracle = brute_theta(z.inv(), 0.001, 1..10_000);
        assert!((v - oracle).norm() < 1e-15);
        assert!((v - c(-1.0 / 21.0, 0.0)).norm() < 1e-3);

        let z = c(0.0, 1.0);
        let v = negative_tail(z, 0.5, &p).unwrap().value;
        let oracle = brute_theta(z.inv(), 0.5, 1..200);
        assert!((v - oracle).norm() < 1e-12);

        assert!(matches!(
            negative_tail(c(0.05, 0.0), 0.01, &p),
            Err(ThetaError::InfeasibleCancellation { .. })
        ));
    }

    #[test]
    fn order_probe_examples() {
        let radii = [1e3, 1e6, 1e9, 1e12];
        let v = order_probe(0.1, &radii);
        assert!(v.windows(2).all(|w| w[1] < w[0]), "{v:?}");
        // Laplace peak-term model ln((ln r)²/(4ε)) / ln r at r = 10¹²
        let ln_r = 1e12f64.ln();
        let model = (ln_r * ln_r / 0.4).ln() / ln_r;
        assert!((v[3] - model).abs() < 0.01, "{} vs {model}", v[3]);
        let w = order_probe(0.5, &radii);
        assert!(v.iter().zip(&w).all(|(a, b)| b < a));
    }

    #[test]
    fn peak_log_term_matches_analytic_peak() {
        let p = TruncationPolicy::default();
        for (r, eps) in [(3.0f64, 0.2), (20.0, 0.5), (1.5, 0.05), (50.0, 2.0)] {
            let z = Complex64::from_polar(r, 0.7);
            let res = eval_direct(z, eps, SummingMethod::Theta, &p).unwrap();
            let analytic = r.ln().powi(2) / (4.0 * eps);
            assert!((res.peak_log_term - analytic).abs() <= eps.max(1.0));
            assert!(res.peak_log_term <= analytic + 1e-12);
        }
    }

    #[test]
    fn classical_methods_converge_at_minus_one_point_five() {
        // 80-digit brute-force sums (Σ_{n<4000}) of Σ γ_n(ε)(−1.5)ⁿ, ε = 0.5, 0.3, 0.2, 0.1.
        let oracle = [
            (SummingMethod::GammaRatio, [0.326_107_307_176_691_3, 0.359_515_039_740_726_1, 0.374_183_490_122_326_2, 0.387_641_460_957_560_6]),
            (SummingMethod::Lindelof, [0.194_705_959_402_843_46, 0.283_959_234_171_502_5, 0.325_131_083_339_557, 0.363_807_068_107_466_1]),
            (SummingMethod::MittagLeffler, [0.321_585_416_454_317_5, 0.355_381_656_573_603_16, 0.370_976_978_383_985_97, 0.385_826_133_363_783_7]),
        ];
        let p = TruncationPolicy::default();
        for (m, want) in oracle {
            for (eps, w) in [0.5, 0.3, 0.2, 0.1].into_iter().zip(want) {
                let r = eval_summing(c(-1.5, 0.0), eps, m, &p).unwrap();
                assert!((r.value.re - w).abs() < 1e-9 && r.value.im.abs() < 1e-9, "{m} {eps}: {} vs {w}", r.value);
            }
        }
    }

    #[test]
    fn mittag_leffler_integral_agrees_with_series() {
        let p = TruncationPolicy::default();
        let cases = [(c(0.0, 2.0), 0.3), (c(1.5, 0.0), 0.5), (c(0.5, 0.5), 0.7), (c(-3.0, 1.0), 0.4), (c(1.2, 0.0), 0.9)];
        for (z, a) in cases {
            let series = eval_direct(z, a, SummingMethod::MittagLeffler, &p).unwrap();
            let integral = eval_mittag_leffler_integral(z, a, 1e-14).unwrap();
            let budget = series.abs_error_estimate + integral.abs_error_estimate;
            assert!((series.value - integral.value).norm() <= budget, "{z} {a}: {} vs {}", series.value, integral.value);
            assert!(integral.abs_error_estimate < 1e-12 * series.value.norm().max(1.0));
        }
        // 50-digit partial sums; at −3 + i the series itself loses ~7 digits to cancellation
        let v = eval_mittag_leffler_integral(c(-3.0, 1.0), 0.4, 1e-14).unwrap().value;
        assert!((v - c(0.181_750_931_913_073_36, 0.051_950_747_347_981_41)).norm() < 1e-14);
        let v = eval_mittag_leffler_integral(c(0.0, 2.0), 0.3, 1e-14).unwrap().value;
        assert!((v - c(0.119_534_161_957_067_88, 0.363_391_492_084_905_7)).norm() < 1e-14);
        // E_{1/2}(1.5) = e^{2.25} erfc(−1.5) = 18.653886256262734 (mpmath)
        let v = eval_mittag_leffler_integral(c(1.5, 0.0), 0.5, 1e-14).unwrap().value;
        assert!((v.re - 18.653_886_256_262_734).abs() < 1e-11);
        assert!(matches!(
            eval_mittag_leffler_integral(Complex64::from_polar(2.0, 0.3 * PI), 0.3, 1e-12),
            Err(ThetaError::MarginTooSmall { .. })
        ));
    }

    fn disc_point(r_max: f64) -> impl Strategy<Value = Complex64> {
        (0.0..r_max, -PI..PI).prop_map(|(r, phi)| Complex64::from_polar(r, phi))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conjugate_symmetry(z in disc_point(3.0), eps in 0.05f64..2.0) {
            let p = TruncationPolicy::default();
            let a = eval_direct(z, eps, SummingMethod::Theta, &p).unwrap();
            let b = eval_direct(z.conj(), eps, SummingMethod::Theta, &p).unwrap();
            prop_assert!((a.value.conj() - b.value).norm() <= 1e-13 * a.value.norm().max(1.0));
        }

        #[test]
        fn tail_bound_is_sound(z in disc_point(4.0), eps in 0.02f64..1.0) {
            let p = TruncationPolicy { tol: 1e-8, ..TruncationPolicy::default() };
            let Ok(coarse) = eval_direct(z, eps, SummingMethod::Theta, &p) else { return Ok(()); };
            let fine = eval_direct(z, eps, SummingMethod::Theta, &TruncationPolicy { tol: 1e-30, ..p }).unwrap();
            prop_assert!((coarse.value - fine.value).norm() <= coarse.abs_error_estimate + fine.abs_error_estimate);
        }

        #[test]
        fn bilateral_inversion_symmetry(
            lr in 0.2f64.ln()..5f64.ln(),
            phi in -PI..PI,
            eps in 0.1f64..1.0,
        ) {
            let p = TruncationPolicy::default();
            let z = Complex64::from_polar(lr.exp(), phi);
            let a = eval_bilateral(z, eps, &p).unwrap();
            let b = eval_bilateral(z.inv(), eps, &p).unwrap();
            prop_assert!((a.value - b.value).norm() <= a.abs_error_estimate + b.abs_error_estimate);
        }
    }
}

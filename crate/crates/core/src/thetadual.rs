//! The Jacobi dual of the bilateral theta series.
//!
//! Poisson summation turns `h_ε(z) = Σ_{n∈ℤ} e^{−εn²} zⁿ` into
//!
//! ```text
//! H_ε(ζ) = √(π/ε) Σ_{n∈ℤ} e^{−(ζ − nπ)²/ε},   ζ = ln z / 2i,
//! ```
//!
//! whose terms are single exponentials. Indices split into `Z₁` (where
//! `Re(ζ − nπ)² ≤ 0`, the terms that grow as `ε → 0`) and `Z₂` (the rest, which
//! decay uniformly). A nonempty `Z₁` is exactly the divergence criterion.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, ThetaError};
use crate::numerics::{principal_log, CompensatedSum, ComplexValue};
use crate::summation::{negative_tail, EvalResult, EvalStrategy, TruncationPolicy};

const LAMBDA_DEDUP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPoint {
    pub zeta: ComplexValue,
    pub source_z: ComplexValue,
}

/// `ζ = ln z / 2i` on the principal branch, so `Re ζ ∈ (−π/2, π/2]` and `Im ζ = −ln|z|/2`.
pub fn dual_coordinate(z: ComplexValue) -> Result<DualPoint> {
    let log = principal_log(z).map_err(|_| ThetaError::domain("dual_coordinate", "z = 0 or non-finite"))?;
    Ok(DualPoint {
        zeta: Complex64::new(0.5 * log.im, -0.5 * log.re),
        source_z: z,
    })
}

/// `Re(ζ − nπ)²`, factored to avoid cancellation near zero.
fn re_square(zeta: ComplexValue, n: i64) -> f64 {
    let x = zeta.re - n as f64 * PI;
    (x - zeta.im) * (x + zeta.im)
}

/// Smallest index radius beyond which `Re(ζ − nπ)² ≥ (nπ)²/2`.
fn lattice_radius(zeta: ComplexValue) -> i64 {
    (4.0 * zeta.norm() / PI).ceil() as i64
}

#[derive(Debug, Clone, Copy)]
struct HSum {
    value: ComplexValue,
    error: f64,
    #[cfg_attr(not(test), allow(dead_code))]
    abs_sum: f64,
    terms: usize,
}

fn sum_h(zeta: ComplexValue, eps: f64, tol: f64) -> Result<HSum> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(ThetaError::domain("eval_H", format!("eps = {eps} is not > 0")));
    }
    if !(tol > 0.0) {
        return Err(ThetaError::domain("eval_H", "tol must be positive"));
    }
    if !(zeta.re.is_finite() && zeta.im.is_finite()) {
        return Err(ThetaError::domain("eval_H", "non-finite zeta"));
    }
    let scale = (PI / eps).sqrt();
    // Beyond |n| > N ≥ 4|ζ|/π every term obeys |term| ≤ √(π/ε) e^{−(nπ)²/(2ε)}.
    let tail_beyond = |n: i64| {
        let a = PI * PI / (2.0 * eps);
        let m = (n + 1) as f64;
        let ratio = (-a * (2.0 * m + 1.0)).exp();
        2.0 * scale * (-a * m * m).exp() / (1.0 - ratio)
    };
    let mut n_cut = lattice_radius(zeta).max(1);
    while tail_beyond(n_cut) > tol {
        n_cut += 1;
    }

    let mut acc = CompensatedSum::new();
    let mut abs_sum = 0.0;
    for n in -n_cut..=n_cut {
        let w = zeta - n as f64 * PI;
        let expo = -(w * w) / eps;
        if expo.re > 709.0 {
            return Err(ThetaError::Overflow { op: "eval_H" });
        }
        let term = expo.exp() * scale;
        abs_sum += term.norm();
        acc.add(term);
    }
    let value = acc.value();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(ThetaError::Overflow { op: "eval_H" });
    }
    Ok(HSum {
        value,
        error: tail_beyond(n_cut) + 8.0 * f64::EPSILON * abs_sum,
        abs_sum,
        terms: (2 * n_cut + 1) as usize,
    })
}

/// `H_ε(ζ) = √(π/ε) Σ_n e^{−(ζ−nπ)²/ε}` with certified tail `≤ tol`.
#[allow(non_snake_case)]
pub fn eval_H(zeta: ComplexValue, eps: f64, tol: f64) -> Result<ComplexValue> {
    sum_h(zeta, eps, tol).map(|s| s.value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualDecomposition {
    /// `Z₁(ζ)` in increasing order.
    pub z1: Vec<i64>,
    /// Scan radius: indices `|n| ≤ z2_window` outside `Z₁` were inspected individually.
    pub z2_window: i64,
    /// Distinct `λ_k = −(ζ − nπ)²` over `Z₁`, each with its multiplicity.
    pub lambdas: Vec<(ComplexValue, u32)>,
    /// `max Re λ_k`; `−∞` when `Z₁` is empty.
    pub mu: f64,
    /// `c(ζ) > 0` with `Re(ζ − nπ)² ≥ c(ζ)(n² + 1)` on `Z₂`.
    pub c_zeta: f64,
}

impl DualDecomposition {
    pub fn divergent(&self) -> bool {
        !self.z1.is_empty()
    }
}

pub fn index_split(zeta: ComplexValue) -> DualDecomposition {
    let window = lattice_radius(zeta);
    let mut z1 = Vec::new();
    let mut lambdas: Vec<(ComplexValue, u32)> = Vec::new();
    let mut c_zeta = PI * PI / 8.0;
    for n in -window..=window {
        let r = re_square(zeta, n);
        if r <= 0.0 {
            z1.push(n);
            let w = zeta - n as f64 * PI;
            let lambda = -(w * w);
            match lambdas.iter_mut().find(|(l, _)| (*l - lambda).norm() <= LAMBDA_DEDUP_TOL) {
                Some((_, mult)) => {
                    *mult += 1;
                    assert!(*mult <= 2, "λ representative repeated more than twice at ζ = {zeta}");
                }
                None => lambdas.push((lambda, 1)),
            }
        } else {
            c_zeta = c_zeta.min(r / ((n * n) as f64 + 1.0));
        }
    }
    let mu = lambdas.iter().map(|(l, _)| l.re).fold(f64::NEG_INFINITY, f64::max);
    DualDecomposition { z1, z2_window: window, lambdas, mu, c_zeta }
}

/// Bound on `|H²_ε(ζ)|`, the `Z₂` part of the dual sum.
pub fn h2_bound(decomp: &DualDecomposition, eps: f64) -> f64 {
    let c = decomp.c_zeta;
    let decay = (-c / eps).exp();
    (PI / eps).sqrt() * decay + PI / c.sqrt() * decay
}

/// `ln(√(π/ε) |Σ_k n_k e^{λ_k/ε}|)`, factoring out `e^{μ/ε}`.
pub fn log_growth_envelope(decomp: &DualDecomposition, eps: f64) -> Result<f64> {
    if decomp.lambdas.is_empty() {
        return Err(ThetaError::EmptyZ1);
    }
    let mu = decomp.mu;
    let inner = decomp
        .lambdas
        .iter()
        .fold(Complex64::new(0.0, 0.0), |s, &(l, k)| s + k as f64 * ((l - mu) / eps).exp());
    Ok(0.5 * (PI / eps).ln() + mu / eps + inner.norm().ln())
}

/// `√(π/ε) |Σ_k n_k e^{λ_k/ε}|`, the exact magnitude of the `Z₁` part of the dual sum.
pub fn growth_envelope(decomp: &DualDecomposition, eps: f64) -> Result<f64> {
    let v = log_growth_envelope(decomp, eps)?.exp();
    if v.is_infinite() {
        return Err(ThetaError::Overflow { op: "growth_envelope" });
    }
    Ok(v)
}

/// `f_ε(z) = H_ε(ln z/2i) − Σ_{m≥1} e^{−εm²} z^{−m}` for `|z| > 1`.
pub fn eval_dual_f(z: ComplexValue, eps: f64, tol: f64) -> Result<EvalResult> {
    if !(z.norm() > 1.0) {
        return Err(ThetaError::domain("eval_dual_f", format!("|z| = {} is not > 1", z.norm())));
    }
    let dual = dual_coordinate(z)?;
    let h = sum_h(dual.zeta, eps, tol)?;
    let policy = TruncationPolicy { tol, ..TruncationPolicy::default() };
    let tail = negative_tail(z, eps, &policy)?;
    Ok(EvalResult {
        value: h.value - tail.value,
        abs_error_estimate: h.error + tail.abs_error_estimate,
        strategy: EvalStrategy::DualTheta,
        terms_or_nodes_used: h.terms + tail.terms_or_nodes_used,
        peak_log_term: tail.peak_log_term,
    })
}

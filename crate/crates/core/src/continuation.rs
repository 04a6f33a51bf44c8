//! Analytic continuation of the two half-sums by rotating the ray of integration.
//!
//! The substitution that turns `Σ e^{−εn²} zⁿ` into a Gaussian integral splits
//! `f_ε = f⁺_ε + f⁻_ε`. Rotating the integration ray by `θ` gives
//!
//! ```text
//! f⁺_{ε,θ}(z) = (e^{iθ} / 2√π) ∫_0^∞ e^{−ξ² e^{2iθ}/4} / (1 − z e^{i√ε ξ e^{iθ}}) dξ
//! ```
//!
//! which is holomorphic off the spiral `𝒮⁺_θ = {e^{(tan θ − i)t} : t ≥ 0}`; the minus
//! half-sum is its mirror image, `f⁻_{ε,θ}(z) = conj f⁺_{ε,θ}(conj z)`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Result, ThetaError};
use crate::geometry;
use crate::numerics::{principal_arg, ComplexValue};
use crate::quadrature;
use crate::summation::{EvalResult, EvalStrategy};

/// Distances below this count as "on the spiral".
pub const MIN_SPIRAL_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralSpec {
    pub sign: Sign,
    pub theta: f64,
}

impl SpiralSpec {
    pub fn new(sign: Sign, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= FRAC_PI_4) {
            return Err(ThetaError::domain("SpiralSpec", format!("theta = {theta} outside (0, π/4]")));
        }
        Ok(SpiralSpec { sign, theta })
    }

    /// Maps `z` to the point whose distance to `𝒮⁺_θ` equals the distance of `z` to this spiral.
    fn to_plus_frame(self, z: ComplexValue) -> ComplexValue {
        match self.sign {
            Sign::Plus => z,
            Sign::Minus => z.conj(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub tol: f64,
    /// Upper limit `Ξ` of the truncated integral.
    pub cutoff: f64,
    pub max_panels: usize,
}

impl QuadratureSpec {
    /// `Ξ = √(4 ln(1/tol) / cos 2θ)`, so that `e^{−Ξ² cos 2θ / 4} = tol`.
    pub fn for_angle(theta: f64, tol: f64) -> Self {
        let cutoff = (4.0 * (1.0 / tol).ln() / (2.0 * theta).cos()).sqrt();
        QuadratureSpec { tol, cutoff, max_panels: 1 << 14 }
    }
}

pub fn spiral_point(spec: SpiralSpec, t: f64) -> ComplexValue {
    let k = spec.theta.tan();
    let im = match spec.sign {
        Sign::Plus => -t,
        Sign::Minus => t,
    };
    Complex64::new(k * t, im).exp()
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd { (c, fc) } else { (d, fd) }
}

/// `min_{t ≥ 0} |z − spiral_point(spec, t)|`; exactly 0 for points on the curve
/// within relative accuracy `10⁻⁶`.
pub fn spiral_distance(spec: SpiralSpec, z: ComplexValue) -> f64 {
    let w = spec.to_plus_frame(z);
    let plus = SpiralSpec { sign: Sign::Plus, ..spec };
    let k = spec.theta.tan();
    let dist = |t: f64| (w - spiral_point(plus, t)).norm();
    // |spiral(t)| = e^{kt}; beyond t_max the curve is farther than the t = 0 endpoint.
    let t_max = ((w.norm() + (w - 1.0).norm()).max(1.0).ln() / k).max(0.0);
    let step = 2.0 * PI / 256.0;
    let samples = (t_max / step).ceil() as usize + 2;
    let ts: Vec<f64> = (0..=samples).map(|i| i as f64 * step).collect();
    let ds: Vec<f64> = ts.iter().map(|&t| dist(t)).collect();

    let mut best = ds[0];
    for i in 1..ds.len() - 1 {
        if ds[i] <= ds[i - 1] && ds[i] <= ds[i + 1] {
            let (_, d) = golden_min(dist, ts[i - 1], ts[i + 1], 80);
            best = best.min(d).min(ds[i]);
        }
    }
    best = best.min(*ds.last().unwrap());
    if best < MIN_SPIRAL_DISTANCE * w.norm().max(1.0) {
        0.0
    } else {
        best
    }
}

pub fn in_g_theta(spec: SpiralSpec, z: ComplexValue, margin: f64) -> bool {
    spiral_distance(spec, z) > margin
}

/// Smallest angle for which the segment `[0, z]` does not cross the spiral, i.e.
/// the spiral's first pass over the ray through `z` lies beyond `|z|`.
fn lowest_admissible_theta(sign: Sign, z: ComplexValue) -> Option<f64> {
    let r = z.norm();
    if r <= 1.0 {
        return Some(0.0);
    }
    let phi = match sign {
        Sign::Plus => principal_arg(z),
        Sign::Minus => principal_arg(z.conj()),
    };
    // 𝒮⁺ passes phase φ at t ≡ −φ (mod 2π)
    let t_min = if phi <= 0.0 { -phi } else { 2.0 * PI - phi };
    if t_min == 0.0 {
        return None;
    }
    let theta = (r.ln() / t_min).atan();
    (theta < FRAC_PI_4).then_some(theta)
}

fn best_angle(sign: Sign, z: ComplexValue) -> Option<(f64, f64)> {
    let floor = lowest_admissible_theta(sign, z)?;
    let lo = floor.max(0.01) + 1e-6;
    let hi = FRAC_PI_4 - 0.01;
    if lo >= hi {
        return None;
    }
    let objective = |theta: f64| -spiral_distance(SpiralSpec { sign, theta }, z);
    let grid = 24;
    let h = (hi - lo) / grid as f64;
    let (mut i_best, mut v_best) = (0usize, f64::INFINITY);
    for i in 0..=grid {
        let v = objective(lo + h * i as f64);
        if v < v_best {
            i_best = i;
            v_best = v;
        }
    }
    let a = lo + h * i_best.saturating_sub(1) as f64;
    let b = (lo + h * (i_best + 1) as f64).min(hi);
    let (theta, v) = golden_min(objective, a, b, 40);
    if v < v_best {
        Some((theta, -v))
    } else {
        Some((lo + h * i_best as f64, -v_best))
    }
}

/// One rotation angle per sign maximizing the distance from `z` to the spiral.
///
/// Only angles for which `z` is reachable from the origin without crossing the
/// spiral are considered, so the returned half-sums are the continuation of the
/// branch holomorphic at the origin. Points outside the heart-shaped domain
/// have no such angle.
pub fn select_theta(z: ComplexValue, min_margin: f64) -> Result<(SpiralSpec, SpiralSpec)> {
    let required = min_margin;
    let inside = geometry::in_heart(z, geometry::default_band_width(z)).label == geometry::RegionLabel::InsideG;
    if !inside {
        return Err(ThetaError::NoValidAngle { best: 0.0, required });
    }
    let mut out = [SpiralSpec { sign: Sign::Plus, theta: 0.0 }; 2];
    for (slot, sign) in out.iter_mut().zip([Sign::Plus, Sign::Minus]) {
        let (theta, margin) = best_angle(sign, z).ok_or(ThetaError::NoValidAngle { best: 0.0, required })?;
        if margin < required {
            return Err(ThetaError::NoValidAngle { best: margin, required });
        }
        *slot = SpiralSpec { sign, theta };
    }
    Ok((out[0], out[1]))
}

/// `f^±_{ε,θ}(z)` by adaptive Gauss–Kronrod quadrature on `[0, Ξ]` plus a certified
/// Gaussian tail bound.
pub fn eval_half_contour(
    z: ComplexValue,
    eps: f64,
    spec: SpiralSpec,
    quad: QuadratureSpec,
) -> Result<EvalResult> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(ThetaError::domain("eval_half_contour", format!("eps = {eps} is not > 0")));
    }
    let cos2 = (2.0 * spec.theta).cos();
    if !(spec.theta > 0.0) || cos2 < 1e-3 {
        return Err(ThetaError::domain("eval_half_contour", "theta must lie in (0, π/4) away from π/4"));
    }
    let dist = spiral_distance(spec, z);
    if dist < MIN_SPIRAL_DISTANCE {
        return Err(ThetaError::MarginTooSmall { distance: dist });
    }

    // Work in the + frame and conjugate at the end for the − half-sum.
    let w = spec.to_plus_frame(z);
    let rot = Complex64::from_polar(1.0, spec.theta);
    let rot2 = rot * rot;
    let sqrt_eps = eps.sqrt();
    let integrand = |xi: f64| -> Complex64 {
        let gauss = (-(xi * xi) * rot2 / 4.0).exp();
        let u = (Complex64::i() * sqrt_eps * xi * rot).exp();
        gauss / (1.0 - w * u)
    };
    let norm = 1.0 / (2.0 * PI.sqrt());
    let panels = 32;
    let out = quadrature::integrate(integrand, 0.0, quad.cutoff, panels, quad.tol / norm, quad.max_panels)?;

    let a = cos2 / 4.0;
    let xi = quad.cutoff;
    let gaussian_tail = (-a * xi * xi).exp() / (2.0 * a * xi);
    let tail = norm * (1.0 + z.norm() / dist) * gaussian_tail;

    let mut value = norm * rot * out.value;
    if spec.sign == Sign::Minus {
        value = value.conj();
    }
    Ok(EvalResult {
        value,
        abs_error_estimate: norm * out.error_estimate + tail,
        strategy: EvalStrategy::Contour,
        terms_or_nodes_used: out.evaluations,
        peak_log_term: f64::NAN,
    })
}

/// `f_ε(z) = f⁺_{ε,θ⁺}(z) + f⁻_{ε,θ⁻}(z)`.
pub fn eval_contour(
    z: ComplexValue,
    eps: f64,
    plus: SpiralSpec,
    minus: SpiralSpec,
    tol: f64,
) -> Result<EvalResult> {
    if plus.sign != Sign::Plus || minus.sign != Sign::Minus {
        return Err(ThetaError::domain("eval_contour", "expected one + and one − spiral"));
    }
    let p = eval_half_contour(z, eps, plus, QuadratureSpec::for_angle(plus.theta, tol))?;
    let m = eval_half_contour(z, eps, minus, QuadratureSpec::for_angle(minus.theta, tol))?;
    Ok(EvalResult {
        value: p.value + m.value,
        abs_error_estimate: p.abs_error_estimate + m.abs_error_estimate,
        strategy: EvalStrategy::Contour,
        terms_or_nodes_used: p.terms_or_nodes_used + m.terms_or_nodes_used,
        peak_log_term: f64::NAN,
    })
}

/// [`eval_contour`] with angles chosen by [`select_theta`].
pub fn eval_contour_auto(z: ComplexValue, eps: f64, tol: f64, min_margin: f64) -> Result<EvalResult> {
    let (plus, minus) = select_theta(z, min_margin)?;
    eval_contour(z, eps, plus, minus, tol)
}

/// The a-priori bound `|f^±_{ε,θ}(z)| ≤ √(1/cos 2θ) · (1 + |z| / dist(z, 𝒮^±_θ))`.
pub fn uniform_bound(z: ComplexValue, spec: SpiralSpec) -> f64 {
    let dist = spiral_distance(spec, z);
    (1.0 / (2.0 * spec.theta).cos()).sqrt() * (1.0 + z.norm() / dist)
}

pub fn check_uniform_bound(z: ComplexValue, spec: SpiralSpec, value: ComplexValue) -> bool {
    value.norm() <= uniform_bound(z, spec)
}

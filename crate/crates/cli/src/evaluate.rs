//! Strategy dispatch for single-point evaluation.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use theta_sum::continuation::eval_contour_auto;
use theta_sum::summation::{eval_direct, eval_summing};
use theta_sum::thetadual::eval_dual_f;
use theta_sum::{EvalResult, SummingMethod, ThetaError};

use crate::config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Series,
    Dual,
    Contour,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "series" => Ok(Strategy::Series),
            "dual" => Ok(Strategy::Dual),
            "contour" => Ok(Strategy::Contour),
            other => Err(format!("unknown strategy '{other}' (auto|series|dual|contour)")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Auto => "auto",
            Strategy::Series => "series",
            Strategy::Dual => "dual",
            Strategy::Contour => "contour",
        })
    }
}

fn theta_only(method: SummingMethod, route: &'static str) -> Result<(), ThetaError> {
    if method == SummingMethod::Theta {
        Ok(())
    } else {
        Err(ThetaError::Domain {
            op: route,
            reason: format!("the {route} route exists only for the theta method, not {method}"),
        })
    }
}

/// Auto picks the direct series inside the closed unit disc. Outside it the dual
/// route is used, unless the series is also feasible and reports a smaller error.
/// Classical methods always go through the series (with the Mittag-Leffler
/// integral as fallback).
pub fn evaluate(
    z: Complex64,
    eps: f64,
    method: SummingMethod,
    strategy: Strategy,
    cfg: &Config,
) -> Result<EvalResult, ThetaError> {
    let policy = cfg.truncation();
    match strategy {
        Strategy::Series => eval_direct(z, eps, method, &policy),
        Strategy::Dual => {
            theta_only(method, "dual")?;
            eval_dual_f(z, eps, cfg.tol)
        }
        Strategy::Contour => {
            theta_only(method, "contour")?;
            eval_contour_auto(z, eps, cfg.quad_tol, cfg.min_margin)
        }
        Strategy::Auto => {
            if method != SummingMethod::Theta {
                return eval_summing(z, eps, method, &policy);
            }
            if z.norm() <= 1.0 {
                return eval_direct(z, eps, method, &policy);
            }
            let dual = eval_dual_f(z, eps, cfg.tol)?;
            match eval_direct(z, eps, method, &policy) {
                Ok(series) if series.abs_error_estimate < dual.abs_error_estimate => Ok(series),
                _ => Ok(dual),
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRecord {
    pub z_re: f64,
    pub z_im: f64,
    pub eps: f64,
    pub method: String,
    pub value_re: f64,
    pub value_im: f64,
    pub abs_err: f64,
    pub strategy: String,
    pub work: usize,
}

impl EvalRecord {
    pub fn new(z: Complex64, eps: f64, method: SummingMethod, r: &EvalResult) -> Self {
        EvalRecord {
            z_re: z.re,
            z_im: z.im,
            eps,
            method: method.name().to_string(),
            value_re: r.value.re,
            value_im: r.value.im,
            abs_err: r.abs_error_estimate,
            strategy: r.strategy.name().to_string(),
            work: r.terms_or_nodes_used,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

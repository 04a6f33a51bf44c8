//! ε-sweeps at a fixed point, written as CSV.

use std::io::Write;

use num_complex::Complex64;

use theta_sum::SummingMethod;

use crate::config::Config;
use crate::error::CliError;
use crate::evaluate::{evaluate, Strategy};

pub const CSV_HEADER: &str = "eps,re,im,abs_err,strategy";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub eps_start: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(eps_start: f64, ratio: f64, steps: usize) -> Result<Self, CliError> {
        if !(eps_start > 0.0 && eps_start.is_finite()) {
            return Err(CliError::Usage(format!("eps-start = {eps_start} must be > 0")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(CliError::Usage(format!("ratio = {ratio} must lie in (0, 1)")));
        }
        if steps == 0 {
            return Err(CliError::Usage("steps must be at least 1".into()));
        }
        Ok(SweepSpec { eps_start, ratio, steps })
    }

    pub fn schedule(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.eps_start * self.ratio.powi(k as i32)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eps: f64,
    pub value: Complex64,
    /// `|value − 1/(1 − z)|`
    pub abs_err: f64,
    pub strategy: &'static str,
}

pub fn run_sweep(
    z: Complex64,
    spec: &SweepSpec,
    method: SummingMethod,
    strategy: Strategy,
    cfg: &Config,
) -> Result<Vec<SweepRow>, CliError> {
    let target = (Complex64::new(1.0, 0.0) - z).inv();
    spec.schedule()
        .into_iter()
        .map(|eps| {
            let r = evaluate(z, eps, method, strategy, cfg)?;
            Ok(SweepRow {
                eps,
                value: r.value,
                abs_err: (r.value - target).norm(),
                strategy: r.strategy.name(),
            })
        })
        .collect()
}

/// One row per ε; numbers in `{:.16e}` (17 significant digits), `\n` line endings.
pub fn write_csv(rows: &[SweepRow], w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e},{}", r.eps, r.value.re, r.value.im, r.abs_err, r.strategy)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_sweep_decreases() {
        let spec = SweepSpec::new(0.5, 0.5, 12).unwrap();
        let rows = run_sweep(Complex64::new(0.5, 0.0), &spec, SummingMethod::Theta, Strategy::Auto, &Config::default()).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.windows(2).all(|w| w[1].abs_err < w[0].abs_err));
    }

    #[test]
    fn csv_layout() {
        let rows = vec![SweepRow { eps: 0.5, value: Complex64::new(1.25, -0.0), abs_err: 1e-3, strategy: "series" }];
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "eps,re,im,abs_err,strategy\n5.0000000000000000e-1,1.2500000000000000e0,-0.0000000000000000e0,1.0000000000000000e-3,series\n"
        );
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(SweepSpec::new(0.0, 0.5, 3).is_err());
        assert!(SweepSpec::new(0.1, 1.0, 3).is_err());
        assert!(SweepSpec::new(0.1, 0.5, 0).is_err());
    }
}

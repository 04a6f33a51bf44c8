//! Run defaults from a plain-text `key = value` file.
//!
//! The file named by `THETA_SUM_CONFIG` (if set) is read first; command-line
//! flags override individual keys. Lines starting with `#` are comments.

use std::path::Path;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "THETA_SUM_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Absolute truncation target for the series and dual sums.
    pub tol: f64,
    pub peak_log_budget: f64,
    pub max_terms: usize,
    /// Absolute tolerance for each half-contour quadrature.
    pub quad_tol: f64,
    /// Fixed boundary band; `None` means `10⁻⁹·max(1, |z|)` per point.
    pub band_width: Option<f64>,
    /// Smallest spiral distance accepted by the contour route.
    pub min_margin: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-17,
            peak_log_budget: 1e12f64.ln(),
            max_terms: 10_000_000,
            quad_tol: 1e-11,
            band_width: None,
            min_margin: 1e-3,
        }
    }
}

fn positive(key: &str, value: &str) -> Result<f64, CliError> {
    match value.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(CliError::Usage(format!("config key '{key}': '{value}' is not a positive number"))),
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "tol" => self.tol = positive(key, value)?,
            "peak_log_budget" => self.peak_log_budget = positive(key, value)?,
            "max_terms" => {
                self.max_terms = value
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| CliError::Usage(format!("config key 'max_terms': '{value}' is not a positive integer")))?
            }
            "quad_tol" => self.quad_tol = positive(key, value)?,
            "band_width" => self.band_width = Some(positive(key, value)?),
            "min_margin" => self.min_margin = positive(key, value)?,
            other => return Err(CliError::Usage(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    /// Defaults, overlaid with the file named by `THETA_SUM_CONFIG` when set.
    pub fn from_env() -> Result<Config, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Config::load(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn truncation(&self) -> theta_sum::TruncationPolicy {
        theta_sum::TruncationPolicy {
            tol: self.tol,
            peak_log_budget: self.peak_log_budget,
            max_terms: self.max_terms,
        }
    }

    pub fn band_for(&self, z: num_complex::Complex64) -> f64 {
        self.band_width.unwrap_or_else(|| theta_sum::geometry::default_band_width(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = Config::parse("# defaults\ntol = 1e-14\n\nmax_terms=5000\nband_width = 1e-6\n").unwrap();
        assert_eq!(cfg.tol, 1e-14);
        assert_eq!(cfg.max_terms, 5000);
        assert_eq!(cfg.band_width, Some(1e-6));
        assert_eq!(cfg.quad_tol, Config::default().quad_tol);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("tol 1e-3").is_err());
        assert!(Config::parse("tol = -1").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("max_terms = 0").is_err());
    }
}

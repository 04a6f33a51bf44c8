//! Command-line driver for `theta-sum`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod complex;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod output;
pub mod scan;
pub mod sweep;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use theta_sum::SummingMethod;

use crate::config::Config;
use crate::error::CliError;
use crate::evaluate::{evaluate, EvalRecord, Strategy};
use crate::scan::GridSpec;
use crate::sweep::SweepSpec;

#[derive(Debug, Parser)]
#[command(name = "theta-sum", version, about = "Theta summation of the geometric series")]
pub struct Cli {
    /// Override a configuration key (repeatable), e.g. `--set tol=1e-15`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the summed series at one point and print a JSON record.
    Eval(EvalArgs),
    /// Evaluate along a geometric ε schedule and write CSV.
    Sweep(SweepArgs),
    /// Classify a rectangular grid and write SVG, PPM and JSON files.
    Scan(ScanArgs),
    /// Classify a single point against the heart-shaped region.
    Classify(ClassifyArgs),
    /// Run the acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_parser = complex::parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long, value_parser = positive_f64)]
    pub eps: f64,
    #[arg(long, default_value = "theta")]
    pub method: SummingMethod,
    #[arg(long, default_value = "auto")]
    pub strategy: Strategy,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = complex::parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long, default_value = "0.5", value_parser = positive_f64)]
    pub eps_start: f64,
    #[arg(long, default_value = "0.5", value_parser = positive_f64)]
    pub ratio: f64,
    #[arg(long, default_value = "10")]
    pub steps: usize,
    #[arg(long, default_value = "theta")]
    pub method: SummingMethod,
    #[arg(long, default_value = "auto")]
    pub strategy: Strategy,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value = "-30", allow_hyphen_values = true)]
    pub re_min: f64,
    #[arg(long, default_value = "30", allow_hyphen_values = true)]
    pub re_max: f64,
    #[arg(long, default_value = "-30", allow_hyphen_values = true)]
    pub im_min: f64,
    #[arg(long, default_value = "30", allow_hyphen_values = true)]
    pub im_max: f64,
    #[arg(long, default_value = "400")]
    pub cols: usize,
    #[arg(long, default_value = "400")]
    pub rows: usize,
    /// Output prefix: writes `<out>.svg`, `<out>.ppm`, `<out>.json` and, with `--heat`, `<out>.heat.ppm`.
    #[arg(long)]
    pub out: PathBuf,
    /// Also record `log10 max |f_ε|` over the ε schedule at every pixel.
    #[arg(long)]
    pub heat: bool,
    #[arg(long, default_value = "0.5", value_parser = positive_f64)]
    pub heat_eps_start: f64,
    #[arg(long, default_value = "0.5", value_parser = positive_f64)]
    pub heat_ratio: f64,
    #[arg(long, default_value = "10")]
    pub heat_steps: usize,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = complex::parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Criterion number or a substring of its name.
    #[arg(long)]
    pub suite: Option<String>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a positive finite number")),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<'a, I, T>(args: I, stdout: &'a mut dyn Write, stderr: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "theta-sum: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = Config::from_env()?;
    for kv in &cli.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    let stdout_err = |e: io::Error| CliError::io("<stdout>", e);

    match cli.command {
        Command::Eval(a) => {
            let r = evaluate(a.z, a.eps, a.method, a.strategy, &cfg)?;
            writeln!(out, "{}", EvalRecord::new(a.z, a.eps, a.method, &r).to_json()).map_err(stdout_err)
        }
        Command::Sweep(a) => {
            let spec = SweepSpec::new(a.eps_start, a.ratio, a.steps)?;
            let rows = sweep::run_sweep(a.z, &spec, a.method, a.strategy, &cfg)?;
            match a.out {
                Some(path) => output::write_atomic(&path, |w| {
                    sweep::write_csv(&rows, w).map_err(|e| CliError::io(&path, e))
                }),
                None => sweep::write_csv(&rows, out).map_err(stdout_err),
            }
        }
        Command::Scan(a) => {
            let grid = GridSpec::new(a.re_min, a.re_max, a.im_min, a.im_max, a.cols, a.rows)?;
            let heat = if a.heat { Some(SweepSpec::new(a.heat_eps_start, a.heat_ratio, a.heat_steps)?) } else { None };
            let result = scan::scan(&grid, &cfg, heat.as_ref());
            let written = scan::write_scan(&result, &a.out)?;
            for p in written {
                writeln!(out, "{}", p.display()).map_err(stdout_err)?;
            }
            Ok(())
        }
        Command::Classify(a) => {
            let v = theta_sum::geometry::classify_f(a.z, cfg.band_for(a.z));
            let record = json!({
                "z_re": a.z.re,
                "z_im": a.z.im,
                "label": v.label.name(),
                "margin": v.margin,
                "witness_z1": v.witness_z1,
                "divergent": v.divergent(),
            });
            writeln!(out, "{record}").map_err(stdout_err)
        }
        Command::Verify(a) => {
            let outcomes = acceptance::run(a.suite.as_deref(), &cfg);
            if outcomes.is_empty() {
                return Err(CliError::Usage(format!("no criterion matches '{}'", a.suite.unwrap_or_default())));
            }
            for o in &outcomes {
                writeln!(out, "{o}").map_err(stdout_err)?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            writeln!(out, "{} of {} criteria passed", outcomes.len() - failed, outcomes.len()).map_err(stdout_err)?;
            if failed > 0 {
                return Err(CliError::VerifyFailed { failed, total: outcomes.len() });
            }
            Ok(())
        }
    }
}

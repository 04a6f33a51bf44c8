//! Region scans: per-pixel verdicts against the heart-shaped domain, the curve
//! overlay, an optional heat map of the sampled `max_ε |f_ε(z)|`, and a summary.
//!
//! Rows are evaluated in parallel and merged in row order, so the output bytes do
//! not depend on the number of worker threads.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use theta_sum::geometry::{classify_f, heart_curve_point, RegionLabel};
use theta_sum::SummingMethod;

use crate::config::Config;
use crate::error::CliError;
use crate::evaluate::{evaluate, Strategy};
use crate::output::write_atomic;
use crate::sweep::SweepSpec;

pub const CURVE_SEGMENTS: usize = 2048;
pub const CURVE_COLOR: &str = "#d62728";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub cols: usize,
    pub rows: usize,
}

impl GridSpec {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, cols: usize, rows: usize) -> Result<Self, CliError> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !finite || !(re_min < re_max) || !(im_min < im_max) {
            return Err(CliError::Usage("grid needs re-min < re-max and im-min < im-max".into()));
        }
        if cols == 0 || rows == 0 || cols.saturating_mul(rows) > 100_000_000 {
            return Err(CliError::Usage("grid needs 1 ≤ cols·rows ≤ 10⁸".into()));
        }
        Ok(GridSpec { re_min, re_max, im_min, im_max, cols, rows })
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / self.cols as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / self.rows as f64
    }

    /// Center of pixel `(col, row)`; row 0 is the top edge (`im_max`).
    pub fn pixel_center(&self, col: usize, row: usize) -> Complex64 {
        Complex64::new(
            self.re_min + (col as f64 + 0.5) * self.dx(),
            self.im_max - (row as f64 + 0.5) * self.dy(),
        )
    }

    /// Continuous image coordinates of `z` (pixel edges at integers).
    pub fn to_image(&self, z: Complex64) -> (f64, f64) {
        ((z.re - self.re_min) / self.dx(), (self.im_max - z.im) / self.dy())
    }

    pub fn from_image(&self, x: f64, y: f64) -> Complex64 {
        Complex64::new(self.re_min + x * self.dx(), self.im_max - y * self.dy())
    }

    /// Pixel containing `z`, if inside the grid.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let (x, y) = self.to_image(z);
        (x >= 0.0 && y >= 0.0 && x < self.cols as f64 && y < self.rows as f64).then_some((x as usize, y as usize))
    }
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub grid: GridSpec,
    /// Row-major verdicts, row 0 at the top.
    pub labels: Vec<RegionLabel>,
    /// Row-major `log10 max_ε |f_ε(z)|` over the heat schedule.
    pub heat: Option<Vec<f64>>,
    pub heat_spec: Option<SweepSpec>,
}

impl ScanResult {
    pub fn label_at(&self, col: usize, row: usize) -> RegionLabel {
        self.labels[row * self.grid.cols + col]
    }

    pub fn count(&self, label: RegionLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

fn heat_value(z: Complex64, spec: &SweepSpec, cfg: &Config) -> f64 {
    spec.schedule()
        .into_iter()
        .map(|eps| match evaluate(z, eps, SummingMethod::Theta, Strategy::Auto, cfg) {
            Ok(r) => r.value.norm().log10(),
            Err(_) => f64::INFINITY,
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn scan(grid: &GridSpec, cfg: &Config, heat: Option<&SweepSpec>) -> ScanResult {
    let rows: Vec<(Vec<RegionLabel>, Vec<f64>)> = (0..grid.rows)
        .into_par_iter()
        .map(|row| {
            let mut labels = Vec::with_capacity(grid.cols);
            let mut heats = Vec::new();
            for col in 0..grid.cols {
                let z = grid.pixel_center(col, row);
                labels.push(classify_f(z, cfg.band_for(z)).label);
                if let Some(spec) = heat {
                    heats.push(heat_value(z, spec, cfg));
                }
            }
            (labels, heats)
        })
        .collect();
    let mut labels = Vec::with_capacity(grid.cols * grid.rows);
    let mut heats = Vec::new();
    for (l, h) in rows {
        labels.extend(l);
        heats.extend(h);
    }
    ScanResult {
        grid: *grid,
        labels,
        heat: heat.map(|_| heats),
        heat_spec: heat.copied(),
    }
}

pub fn label_rgb(label: RegionLabel) -> [u8; 3] {
    match label {
        RegionLabel::InsideG => [0x4c, 0x78, 0xa8],
        RegionLabel::OutsideG => [0xee, 0xee, 0xee],
        RegionLabel::BoundaryBand => [0x00, 0x00, 0x00],
    }
}

fn hex(rgb: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
}

/// Samples of the heart curve `e^{|t|+it}`, `t = −π … π`, in image coordinates.
pub fn curve_image_points(grid: &GridSpec) -> Vec<(f64, f64)> {
    (0..=CURVE_SEGMENTS)
        .map(|i| {
            let t = -PI + 2.0 * PI * i as f64 / CURVE_SEGMENTS as f64;
            grid.to_image(heart_curve_point(t))
        })
        .collect()
}

pub fn render_svg(result: &ScanResult) -> String {
    let g = &result.grid;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{r}\" viewBox=\"0 0 {c} {r}\" shape-rendering=\"crispEdges\">",
        c = g.cols,
        r = g.rows
    );
    s.push_str("<g id=\"verdicts\">\n");
    for row in 0..g.rows {
        let mut col = 0;
        while col < g.cols {
            let label = result.label_at(col, row);
            let start = col;
            while col < g.cols && result.label_at(col, row) == label {
                col += 1;
            }
            let _ = writeln!(
                s,
                "<rect x=\"{start}\" y=\"{row}\" width=\"{}\" height=\"1\" fill=\"{}\"/>",
                col - start,
                hex(label_rgb(label))
            );
        }
    }
    s.push_str("</g>\n");
    let points: Vec<String> = curve_image_points(g).iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    let _ = writeln!(
        s,
        "<polyline id=\"curve\" fill=\"none\" stroke=\"{CURVE_COLOR}\" stroke-width=\"1.5\" points=\"{}\"/>",
        points.join(" ")
    );
    s.push_str("<g id=\"crossings\">\n");
    for t in [PI, 0.0] {
        let z = heart_curve_point(t);
        let (x, y) = g.to_image(Complex64::new(z.re, 0.0));
        let _ = writeln!(
            s,
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"none\" stroke=\"{CURVE_COLOR}\" data-re=\"{:.15}\"/>",
            z.re
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn ppm(cols: usize, rows: usize, pixels: impl Iterator<Item = [u8; 3]>) -> Vec<u8> {
    let mut out = format!("P6\n{cols} {rows}\n255\n").into_bytes();
    for p in pixels {
        out.extend_from_slice(&p);
    }
    out
}

/// Binary PPM (P6) of the verdict colors.
pub fn render_verdict_ppm(result: &ScanResult) -> Vec<u8> {
    ppm(result.grid.cols, result.grid.rows, result.labels.iter().map(|&l| label_rgb(l)))
}

/// Lower and upper ends of the heat color scale (log10 of the sampled maximum).
pub fn heat_range(values: &[f64]) -> (f64, f64) {
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let lo = finite.clone().fold(f64::INFINITY, f64::min);
    let hi = finite.fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        (lo, hi.max(lo + 1e-12))
    } else {
        (0.0, 1.0)
    }
}

/// Dark blue → orange → pale yellow ramp.
fn heat_rgb(u: f64) -> [u8; 3] {
    const STOPS: [[f64; 3]; 3] = [[13.0, 8.0, 135.0], [240.0, 120.0, 40.0], [252.0, 245.0, 180.0]];
    let u = u.clamp(0.0, 1.0) * 2.0;
    let (a, b, f) = if u < 1.0 { (STOPS[0], STOPS[1], u) } else { (STOPS[1], STOPS[2], u - 1.0) };
    [0, 1, 2].map(|k| (a[k] + (b[k] - a[k]) * f).round() as u8)
}

pub fn render_heat_ppm(result: &ScanResult) -> Option<Vec<u8>> {
    let values = result.heat.as_ref()?;
    let (lo, hi) = heat_range(values);
    let pix = values.iter().map(|&v| {
        let u = if v.is_finite() { (v - lo) / (hi - lo) } else { 1.0 };
        heat_rgb(u)
    });
    Some(ppm(result.grid.cols, result.grid.rows, pix))
}

#[derive(Debug, Serialize)]
struct Counts {
    inside: usize,
    outside: usize,
    boundary: usize,
}

#[derive(Debug, Serialize)]
struct HeatSummary {
    eps_start: f64,
    ratio: f64,
    steps: usize,
    log10_min: f64,
    log10_max: f64,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    grid: &'a GridSpec,
    counts: Counts,
    curve_real_crossings: [f64; 2],
    heat: Option<HeatSummary>,
    files: Vec<String>,
}

pub fn summary_json(result: &ScanResult, files: &[String]) -> String {
    let heat = match (&result.heat, &result.heat_spec) {
        (Some(v), Some(spec)) => {
            let (lo, hi) = heat_range(v);
            Some(HeatSummary { eps_start: spec.eps_start, ratio: spec.ratio, steps: spec.steps, log10_min: lo, log10_max: hi })
        }
        _ => None,
    };
    let summary = Summary {
        grid: &result.grid,
        counts: Counts {
            inside: result.count(RegionLabel::InsideG),
            outside: result.count(RegionLabel::OutsideG),
            boundary: result.count(RegionLabel::BoundaryBand),
        },
        curve_real_crossings: [heart_curve_point(PI).re, heart_curve_point(0.0).re],
        heat,
        files: files.to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
    s.push('\n');
    s
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut os = prefix.as_os_str().to_owned();
    os.push(suffix);
    PathBuf::from(os)
}

fn put(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, |w| w.write_all(bytes).map_err(|e| CliError::io(path, e)))
}

/// Writes `<prefix>.svg`, `<prefix>.ppm`, `<prefix>.heat.ppm` (with heat data) and
/// `<prefix>.json`, each atomically. Returns the written paths.
pub fn write_scan(result: &ScanResult, prefix: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    let svg = with_suffix(prefix, ".svg");
    put(&svg, render_svg(result).as_bytes())?;
    written.push(svg);
    let map = with_suffix(prefix, ".ppm");
    put(&map, &render_verdict_ppm(result))?;
    written.push(map);
    if let Some(bytes) = render_heat_ppm(result) {
        let heat = with_suffix(prefix, ".heat.ppm");
        put(&heat, &bytes)?;
        written.push(heat);
    }
    let json = with_suffix(prefix, ".json");
    let names: Vec<String> = written
        .iter()
        .map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    put(&json, summary_json(result, &names).as_bytes())?;
    written.push(json);
    Ok(written)
}

/// Real-axis crossings of the rendered curve, read back from the SVG polyline.
pub fn svg_curve_real_crossings(svg: &str, grid: &GridSpec) -> Vec<f64> {
    let Some(start) = svg.find("id=\"curve\"") else { return Vec::new() };
    let rest = &svg[start..];
    let Some(p0) = rest.find("points=\"") else { return Vec::new() };
    let body = &rest[p0 + 8..];
    let body = &body[..body.find('"').unwrap_or(body.len())];
    let pts: Vec<(f64, f64)> = body
        .split_whitespace()
        .filter_map(|pair| {
            let (x, y) = pair.split_once(',')?;
            Some((x.parse().ok()?, y.parse().ok()?))
        })
        .collect();
    let axis_y = grid.to_image(Complex64::new(0.0, 0.0)).1;
    let mut hits = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0].1 - axis_y, w[1].1 - axis_y);
        if a * b <= 0.0 {
            let f = if a == b { 0.0 } else { a / (a - b) };
            hits.push(grid.from_image(w[0].0 + f * (w[1].0 - w[0].0), axis_y).re);
        }
    }
    hits.sort_by(f64::total_cmp);
    // merge touches that the 3-decimal rounding splits into several nearby hits
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for h in hits {
        match clusters.last_mut() {
            Some(c) if h - c[c.len() - 1] < 2.0 * grid.dx() => c.push(h),
            _ => clusters.push(vec![h]),
        }
    }
    clusters.iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
}

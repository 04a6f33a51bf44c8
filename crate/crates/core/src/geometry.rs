//! The heart-shaped domain `𝒢` and its dual-plane description.
//!
//! `𝒢` is the interior of `𝒞 = {e^{|t|+it} : t ∈ [−π, π]}`; in polar form
//! `z = re^{iφ}` with principal `φ` it is simply `r < e^{|φ|}`. Under
//! `ζ = ln z / 2i` the complement maps into the cone `Γ₋ = {η ≤ −min_n |ξ − nπ|}`,
//! which is where the dual index set `Z₁` is nonempty.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::numerics::{principal_arg, ComplexValue};
use crate::thetadual::{dual_coordinate, index_split};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    InsideG,
    OutsideG,
    BoundaryBand,
}

impl RegionLabel {
    pub fn name(self) -> &'static str {
        match self {
            RegionLabel::InsideG => "inside",
            RegionLabel::OutsideG => "outside",
            RegionLabel::BoundaryBand => "boundary",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionVerdict {
    pub label: RegionLabel,
    /// `e^{|φ|} − r`: positive inside, negative outside.
    pub margin: f64,
    /// `Z₁` of the dual point, attached to points outside `𝒢`.
    pub witness_z1: Option<Vec<i64>>,
}

impl RegionVerdict {
    /// Whether `limsup_{ε→0} |f_ε(z)| = ∞`. Points on the curve itself diverge.
    pub fn divergent(&self) -> bool {
        self.label != RegionLabel::InsideG
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConePlanePoint {
    pub xi: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeFlags {
    pub in_gamma_plus: bool,
    pub in_gamma_minus: bool,
    pub in_all_q: bool,
    pub in_some_t: bool,
}

pub fn heart_curve_point(t: f64) -> ComplexValue {
    Complex64::from_polar(t.abs().exp(), t)
}

/// `10⁻⁹ · max(1, |z|)`.
pub fn default_band_width(z: ComplexValue) -> f64 {
    1e-9 * z.norm().max(1.0)
}

fn label_for(margin: f64, band_width: f64) -> RegionLabel {
    if margin > band_width {
        RegionLabel::InsideG
    } else if margin < -band_width {
        RegionLabel::OutsideG
    } else {
        RegionLabel::BoundaryBand
    }
}

fn z1_witness(z: ComplexValue) -> Option<Vec<i64>> {
    dual_coordinate(z).ok().map(|d| index_split(d.zeta).z1)
}

/// Closed-form classification by the sign of `e^{|φ|} − r`.
pub fn in_heart(z: ComplexValue, band_width: f64) -> RegionVerdict {
    let r = z.norm();
    let margin = principal_arg(z).abs().exp() - r;
    let label = label_for(margin, band_width);
    let witness_z1 = (label == RegionLabel::OutsideG).then(|| z1_witness(z)).flatten();
    RegionVerdict { label, margin, witness_z1 }
}

/// Divergence predicate through the dual plane: `z = 1`, or `|z| > 1` with `Z₁ ≠ ∅`.
pub fn dual_route_divergent(z: ComplexValue) -> bool {
    if z == Complex64::new(1.0, 0.0) {
        return true;
    }
    if z.norm() <= 1.0 {
        return false;
    }
    dual_coordinate(z).map(|d| index_split(d.zeta).divergent()).unwrap_or(false)
}

/// Divergence predicate for the bilateral family: `Z₁ ≠ ∅` at the dual point.
pub fn bilateral_divergent(z: ComplexValue) -> bool {
    dual_coordinate(z).map(|d| index_split(d.zeta).divergent()).unwrap_or(false)
}

/// Classification of `z` for the family `f_ε`; the point `z = 1`, where the
/// margin vanishes, is reported as divergent with its dual witness.
pub fn classify_f(z: ComplexValue, band_width: f64) -> RegionVerdict {
    if z == Complex64::new(1.0, 0.0) {
        return RegionVerdict {
            label: RegionLabel::OutsideG,
            margin: 0.0,
            witness_z1: z1_witness(z),
        };
    }
    in_heart(z, band_width)
}

/// Distance from `ξ` to the lattice `πℤ`, using the two nearest multiples.
fn lattice_distance(xi: f64) -> f64 {
    let n = (xi / PI).floor();
    (xi - n * PI).abs().min((xi - (n + 1.0) * PI).abs())
}

pub fn cone_plane_classify(p: ConePlanePoint) -> ConeFlags {
    let d = lattice_distance(p.xi);
    let n = (p.xi / PI).floor();
    let center = (n + 0.5) * PI;
    ConeFlags {
        in_gamma_plus: p.eta >= d,
        in_gamma_minus: p.eta <= -d,
        in_all_q: d > p.eta.abs(),
        in_some_t: (p.xi - center).abs() + p.eta.abs() < FRAC_PI_2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Winding number of the sampled heart curve around `z`.
    fn winding(z: Complex64, samples: usize) -> i64 {
        let pts: Vec<Complex64> = (0..=samples)
            .map(|i| heart_curve_point(-PI + 2.0 * PI * i as f64 / samples as f64))
            .collect();
        let total: f64 = pts.windows(2).map(|w| ((w[1] - z) / (w[0] - z)).arg()).sum();
        (total / (2.0 * PI)).round() as i64
    }

    #[test]
    fn heart_curve_examples() {
        assert_eq!(heart_curve_point(0.0), c(1.0, 0.0));
        let p = heart_curve_point(PI);
        assert!((p.re + 23.140_692_632_779_267).abs() <= 1e-12 * 23.14);
        for t in [0.3, 1.7, 3.0] {
            assert_eq!(heart_curve_point(-t), heart_curve_point(t).conj());
        }
    }

    #[test]
    fn in_heart_examples() {
        let bw = |z| default_band_width(z);
        assert_eq!(in_heart(c(0.999, 0.0), 1e-9).label, RegionLabel::InsideG);
        assert_eq!(in_heart(c(1.0, 0.0), 1e-9).label, RegionLabel::BoundaryBand);
        assert_eq!(in_heart(c(1.0001, 0.0), 1e-9).label, RegionLabel::OutsideG);
        assert_eq!(in_heart(c(-20.0, 0.0), bw(c(-20.0, 0.0))).label, RegionLabel::InsideG);
        let dir = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert_eq!(in_heart(3.0 * dir, 1e-9).label, RegionLabel::InsideG);
        assert_eq!(in_heart(9.0 * dir, 1e-9).label, RegionLabel::OutsideG);
        assert_eq!(winding(3.0 * dir, 20_000), 1);
        assert_eq!(winding(9.0 * dir, 20_000), 0);
        assert_eq!(in_heart(c(0.0, 0.0), 1e-9).label, RegionLabel::InsideG);
    }

    #[test]
    fn closed_unit_disc_is_inside() {
        for k in 0..720 {
            let phi = -PI + 2.0 * PI * (k as f64 + 0.5) / 720.0;
            for r in [0.1, 0.5, 0.99, 1.0] {
                let z = Complex64::from_polar(r, phi);
                assert_eq!(in_heart(z, 1e-12).label, RegionLabel::InsideG, "{z}");
            }
        }
    }

    #[test]
    fn classify_f_examples() {
        let v = classify_f(c(1.0, 0.0), 1e-9);
        assert_eq!(v.label, RegionLabel::OutsideG);
        assert_eq!(v.witness_z1, Some(vec![0]));
        assert_eq!(classify_f(c(0.5, 0.0), 1e-9).label, RegionLabel::InsideG);
        let v = classify_f(c(1.2, 0.0), 1e-9);
        assert_eq!(v.label, RegionLabel::OutsideG);
        assert_eq!(v.witness_z1, Some(vec![0]));
    }

    #[test]
    fn cone_plane_examples() {
        let f = cone_plane_classify(ConePlanePoint { xi: FRAC_PI_2, eta: 0.0 });
        assert!(f.in_all_q && f.in_some_t && !f.in_gamma_plus && !f.in_gamma_minus);
        let f = cone_plane_classify(ConePlanePoint { xi: 0.0, eta: 0.0 });
        assert!(f.in_gamma_plus && f.in_gamma_minus && !f.in_some_t);
        let p = ConePlanePoint { xi: FRAC_PI_2, eta: FRAC_PI_2 + 0.01 };
        let f = cone_plane_classify(p);
        assert!(f.in_gamma_plus && !f.in_some_t);
        let brute = (-10..=10).map(|n| (p.xi - n as f64 * PI).abs()).fold(f64::INFINITY, f64::min);
        assert!(p.eta >= brute);
    }

    #[test]
    fn predicate_equivalence_on_grid() {
        let n = 200;
        for i in 0..n {
            for j in 0..n {
                let z = c(-30.0 + 60.0 * (i as f64 + 0.5) / n as f64, -30.0 + 60.0 * (j as f64 + 0.5) / n as f64);
                let v = in_heart(z, 1e-6);
                if v.label != RegionLabel::BoundaryBand {
                    assert_eq!(v.label == RegionLabel::OutsideG, dual_route_divergent(z), "{z}");
                }
            }
        }
    }

    fn lattice_point() -> impl Strategy<Value = ConePlanePoint> {
        (-2.0 * PI..2.0 * PI, -PI..PI).prop_map(|(xi, eta)| ConePlanePoint { xi, eta })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn gamma_minus_maps_outside(p in lattice_point()) {
            let f = cone_plane_classify(p);
            prop_assume!(f.in_gamma_minus);
            let z = (2.0 * Complex64::i() * c(p.xi, p.eta)).exp();
            let margin = in_heart(z, 0.0).margin;
            prop_assert!(margin <= 1e-12 * z.norm().max(1.0));
        }

        #[test]
        fn outside_points_map_into_gamma_minus(phi in -PI..PI, extra in 0.0f64..3.0) {
            let z = Complex64::from_polar((phi.abs() + extra).exp(), phi);
            let zeta = dual_coordinate(z).unwrap().zeta;
            let f = cone_plane_classify(ConePlanePoint { xi: zeta.re, eta: zeta.im });
            prop_assert!(f.in_gamma_minus || zeta.im + lattice_distance(zeta.re) < 1e-12);
        }

        #[test]
        fn lattice_identity(p in lattice_point()) {
            let f = cone_plane_classify(p);
            let brute_q = (-20..=20).all(|n| {
                let x = p.xi - n as f64 * PI;
                x * x > p.eta * p.eta
            });
            let center = ((p.xi / PI).floor() + 0.5) * PI;
            let edge = FRAC_PI_2 - (p.xi - center).abs() - p.eta.abs();
            prop_assume!(edge.abs() > 1e-9);
            prop_assert_eq!(f.in_all_q, brute_q);
            prop_assert_eq!(f.in_all_q, f.in_some_t);
        }

        #[test]
        fn conjugation_symmetry(r in 0.0f64..40.0, phi in -PI..PI) {
            let z = Complex64::from_polar(r, phi);
            prop_assume!(phi.abs() < PI - 1e-12);
            prop_assert_eq!(in_heart(z, 1e-9).label, in_heart(z.conj(), 1e-9).label);
        }

        #[test]
        fn bilateral_inversion_invariance(lr in -4.0f64..4.0, phi in -PI..PI) {
            let z = Complex64::from_polar(lr.exp(), phi);
            prop_assume!((lr.abs() - phi.abs()).abs() > 1e-9);
            prop_assert_eq!(bilateral_divergent(z), bilateral_divergent(z.inv()));
        }
    }
}

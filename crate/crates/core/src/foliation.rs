//! Spherical caps meeting the boundary orthogonally, and reference profiles.
//!
//! For a station `x > 0` the circle centred on the axis at height
//! `c(x) = f(x) − x·f′(x)` with radius `r(x) = x·√(1 + f′(x)²)` passes through
//! `(x, f(x))` and its radius there runs along the tangent of the graph, so
//! it meets the graph orthogonally. Rotating gives a spherical cap in
//! `Rⁿ⁺¹`. With `g = c + r`, the caps foliate the body wherever
//! `g′(x) = x·f″(x)·(−1 + f′/√(1 + f′²)) + √(1 + f′²)` is positive.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{BodyOfRevolution, ProbeLadder};
use crate::numerics::ball::{unit_ball_volume, unit_cap_area};
use crate::numerics::quad;

/// Relative accuracy of the cap quadratures.
pub const MEASURE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoliationError {
    #[error("station x = {0} must be positive and finite")]
    InvalidStation(f64),
    #[error("volume v = {0} must be positive and finite")]
    InvalidVolume(f64),
    #[error("cap at x = {x} does not rise above the contact point (c + r = {top}, f(x) = {contact})")]
    DegenerateCap { x: f64, top: f64, contact: f64 },
    #[error("g' stays non-positive up to x = {limit:e}; no foliated region found")]
    ThresholdNotFound { limit: f64 },
    #[error("volume {v} is below the foliated range (caps start at volume {min})")]
    VolumeTooSmall { v: f64, min: f64 },
}

/// One leaf of the foliation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoliationCap {
    pub station: f64,
    pub center_height: f64,
    pub radius: f64,
    /// Averaged mean curvature `1/r`.
    pub mean_curvature: f64,
    /// `f(x)`, the height of the free boundary.
    pub contact_height: f64,
    /// Polar angle of the contact point seen from the centre, measured from
    /// the upward axis.
    pub polar_angle: f64,
    pub enclosed_volume: f64,
    pub cap_perimeter: f64,
}

impl FoliationCap {
    /// `|x² + (f(x) − c)² − r²| / r²`.
    pub fn incidence_residual(&self) -> f64 {
        let dy = self.contact_height - self.center_height;
        (self.station * self.station + dy * dy - self.radius * self.radius).abs() / (self.radius * self.radius)
    }

    /// Sine of the angle between the radius at the contact point and the
    /// tangent `(1, f′(x))` of the graph; zero when the cap meets the graph
    /// orthogonally.
    pub fn orthogonality_residual(&self, body: &BodyOfRevolution) -> f64 {
        let slope = body.profile.slope(self.station);
        let dy = self.contact_height - self.center_height;
        let cross = self.station * slope - dy;
        cross.abs() / (self.radius * (1.0 + slope * slope).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapMeasures {
    pub volume: f64,
    pub perimeter: f64,
}

/// `(c(x), r(x))` in closed form.
pub fn cap_geometry(body: &BodyOfRevolution, x: f64) -> (f64, f64) {
    let f = &body.profile;
    let slope = f.slope(x);
    (f.value(x) - x * slope, x * (1.0 + slope * slope).sqrt())
}

/// `g′(x)`, the derivative of the cap's top height `c + r`.
pub fn g_prime(body: &BodyOfRevolution, x: f64) -> f64 {
    let f = &body.profile;
    let slope = f.slope(x);
    let norm = (1.0 + slope * slope).sqrt();
    x * f.curvature(x) * (-1.0 + slope / norm) + norm
}

pub fn cap_at(body: &BodyOfRevolution, x: f64) -> Result<FoliationCap, FoliationError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(FoliationError::InvalidStation(x));
    }
    let (center_height, radius) = cap_geometry(body, x);
    let contact_height = body.profile.value(x);
    let measures = cap_measures(body, x, center_height, radius)?;
    Ok(FoliationCap {
        station: x,
        center_height,
        radius,
        mean_curvature: 1.0 / radius,
        contact_height,
        polar_angle: x.atan2(contact_height - center_height),
        enclosed_volume: measures.volume,
        cap_perimeter: measures.perimeter,
    })
}

/// Volume of the region of the body below the cap of centre `(0, c)` and
/// radius `r` through `(x, f(x))`, and the area of the cap inside the body.
///
/// The region splits at the contact height: below it every slice is the full
/// slice of the body, `∫₀^{f(x)} (f⁻¹(t))ⁿ dt = ∫₀^x sⁿ f′(s) ds`; above it
/// the slices are those of the ball, integrated in the polar angle.
pub fn cap_measures(body: &BodyOfRevolution, x: f64, center_height: f64, radius: f64) -> Result<CapMeasures, FoliationError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(FoliationError::InvalidStation(x));
    }
    let f = &body.profile;
    let contact = f.value(x);
    if center_height + radius <= contact {
        return Err(FoliationError::DegenerateCap { x, top: center_height + radius, contact });
    }
    let n = body.n as i32;
    let omega = unit_ball_volume(body.n);
    let theta = x.atan2(contact - center_height);

    let lower = quad::integrate(|s: f64| s.powi(n) * f.slope(s), 0.0, x, MEASURE_REL_TOL, 0.0).value;
    let dome = quad::integrate(|p: f64| p.sin().powi(n + 1), 0.0, theta, MEASURE_REL_TOL, 0.0).value;
    let area = quad::integrate(|p: f64| p.sin().powi(n - 1), 0.0, theta, MEASURE_REL_TOL, 0.0).value;

    Ok(CapMeasures {
        volume: omega * (lower + radius.powi(n + 1) * dome),
        perimeter: n as f64 * omega * radius.powi(n) * area,
    })
}

/// Smallest probe station beyond which `g′ > 0` on the rest of the ladder.
pub fn foliation_threshold(body: &BodyOfRevolution) -> Result<f64, FoliationError> {
    foliation_threshold_with(body, &ProbeLadder::default())
}

pub fn foliation_threshold_with(body: &BodyOfRevolution, ladder: &ProbeLadder) -> Result<f64, FoliationError> {
    let xs = ladder.rungs(body.profile.domain_hint());
    threshold_on_ladder(|x| g_prime(body, x), &xs)
}

/// Scans `xs` for the last station with `g ≤ 0` and bisects the sign change
/// that follows it to 1e−10.
fn threshold_on_ladder<G: Fn(f64) -> f64>(g: G, xs: &[f64]) -> Result<f64, FoliationError> {
    match xs.iter().rposition(|&x| g(x) <= 0.0) {
        None => Ok(xs[0]),
        Some(j) if j + 1 == xs.len() => Err(FoliationError::ThresholdNotFound { limit: xs[j] }),
        Some(j) => {
            let (mut lo, mut hi) = (xs[j], xs[j + 1]);
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if g(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(hi)
        }
    }
}

/// Threshold plus a ladder of caps beyond it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoliationChart {
    pub x_m: f64,
    pub samples: Vec<FoliationCap>,
}

impl FoliationChart {
    /// `g′` is positive at every sample.
    pub fn is_foliated(&self, body: &BodyOfRevolution) -> bool {
        self.samples.iter().all(|cap| g_prime(body, cap.station) > 0.0)
    }

    /// Mean curvature never increases along the samples.
    pub fn curvature_non_increasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].mean_curvature <= w[0].mean_curvature)
    }
}

/// Caps at the given increasing stations, each at or beyond `x_m`.
pub fn foliation_chart(body: &BodyOfRevolution, stations: &[f64]) -> Result<FoliationChart, FoliationError> {
    let x_m = foliation_threshold(body)?;
    let mut samples = Vec::with_capacity(stations.len());
    for &x in stations {
        if x < x_m || samples.last().is_some_and(|c: &FoliationCap| c.station >= x) {
            return Err(FoliationError::InvalidStation(x));
        }
        samples.push(cap_at(body, x)?);
    }
    Ok(FoliationChart { x_m, samples })
}

/// Foliated part of a body: caps at stations `x ≥ x_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Foliation {
    pub body: BodyOfRevolution,
    pub x_m: f64,
    /// Enclosed volume of the cap at `x_m`.
    pub min_volume: f64,
}

impl Foliation {
    pub fn new(body: &BodyOfRevolution) -> Result<Self, FoliationError> {
        let x_m = foliation_threshold(body)?;
        let min_volume = cap_at(body, x_m)?.enclosed_volume;
        Ok(Self { body: *body, x_m, min_volume })
    }

    /// The leaf enclosing volume `v`, by bisection on the station.
    pub fn cap_for_volume(&self, v: f64) -> Result<FoliationCap, FoliationError> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(FoliationError::InvalidVolume(v));
        }
        if v < self.min_volume {
            return Err(FoliationError::VolumeTooSmall { v, min: self.min_volume });
        }
        let volume_at = |x: f64| -> Result<f64, FoliationError> {
            let (c, r) = cap_geometry(&self.body, x);
            Ok(cap_measures(&self.body, x, c, r)?.volume)
        };
        let mut lo = self.x_m;
        let mut hi = 2.0 * self.x_m;
        while volume_at(hi)? < v {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if volume_at(mid)? < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lo_gap = (v - volume_at(lo)?).abs();
        let hi_gap = (volume_at(hi)? - v).abs();
        cap_at(&self.body, if lo_gap <= hi_gap { lo } else { hi })
    }
}

/// The leaf of the foliation enclosing volume `v`.
pub fn cap_for_volume(body: &BodyOfRevolution, v: f64) -> Result<FoliationCap, FoliationError> {
    Foliation::new(body)?.cap_for_volume(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReferenceKind {
    /// Cone `{y ≥ a|x|}`; minimizers are balls centred at the vertex.
    Cone { a: f64 },
    /// Half-space; minimizers are half-balls.
    HalfSpace,
}

/// Isoperimetric profile of a cone or half-space in `Rⁿ⁺¹`,
/// `I(v) = I(1)·v^{n/(n+1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceProfile {
    pub kind: ReferenceKind,
    pub n: usize,
}

impl ReferenceProfile {
    pub fn cone(a: f64, n: usize) -> Self {
        Self { kind: ReferenceKind::Cone { a }, n }
    }

    pub fn half_space(n: usize) -> Self {
        Self { kind: ReferenceKind::HalfSpace, n }
    }

    /// Angle between the axis and the boundary rays.
    pub fn half_angle(&self) -> f64 {
        match self.kind {
            ReferenceKind::Cone { a } => (1.0 / a).atan(),
            ReferenceKind::HalfSpace => std::f64::consts::FRAC_PI_2,
        }
    }

    /// Area of the unit geodesic ball centred at the vertex.
    pub fn solid_angle(&self) -> f64 {
        unit_cap_area(self.n, self.half_angle())
    }

    /// Radius of the vertex-centred ball of volume `v`.
    pub fn ball_radius(&self, v: f64) -> f64 {
        let np1 = (self.n + 1) as f64;
        (np1 * v / self.solid_angle()).powf(1.0 / np1)
    }

    pub fn unit_value(&self) -> f64 {
        let np1 = (self.n + 1) as f64;
        self.solid_angle().powf(1.0 / np1) * np1.powf(self.n as f64 / np1)
    }

    pub fn perimeter(&self, v: f64) -> f64 {
        self.unit_value() * v.powf(self.n as f64 / (self.n + 1) as f64)
    }

    /// Mean curvature of the minimizer of volume `v`.
    pub fn mean_curvature(&self, v: f64) -> f64 {
        1.0 / self.ball_radius(v)
    }

    /// The scale-invariant `H·v^{1/(n+1)}` of the minimizers.
    pub fn curvature_constant(&self) -> f64 {
        let np1 = (self.n + 1) as f64;
        (self.solid_angle() / np1).powf(1.0 / np1)
    }
}

pub fn reference_profile(kind: ReferenceKind, n: usize, v: f64) -> f64 {
    ReferenceProfile { kind, n }.perimeter(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeneratingFunction;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn body(n: usize, f: GeneratingFunction) -> BodyOfRevolution {
        BodyOfRevolution::new(n, f).unwrap()
    }

    #[test]
    fn hyperbolic_cap_at_one() {
        let b = body(1, GeneratingFunction::Hyperbolic { a: 1.0, s: 1.0 });
        let cap = cap_at(&b, 1.0).unwrap();
        assert_relative_eq!(cap.center_height, FRAC_1_SQRT_2 - 1.0, max_relative = 1e-14);
        assert_relative_eq!(cap.radius, 1.5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(cap.mean_curvature * cap.radius, 1.0, max_relative = 1e-15);
        assert!(cap.incidence_residual() < 1e-12);
        assert!(cap.orthogonality_residual(&b) < 1e-12);
    }

    #[test]
    fn parabola_cap_at_one() {
        let b = body(2, GeneratingFunction::Parabola { k: 1.0 });
        let cap = cap_at(&b, 1.0).unwrap();
        assert_relative_eq!(cap.center_height, -1.0, max_relative = 1e-15);
        assert_relative_eq!(cap.radius, 5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn cone_caps_are_vertex_balls() {
        let a = 0.7;
        let b = body(2, GeneratingFunction::Cone { a });
        for &x in &[0.5, 1.0, 3.0] {
            let cap = cap_at(&b, x).unwrap();
            assert_eq!(cap.center_height, 0.0);
            assert_relative_eq!(cap.radius, x * (1.0 + a * a).sqrt(), max_relative = 1e-15);
        }
    }

    #[test]
    fn planar_wedge_sector() {
        // Wedge of half-angle π/4, radius √2: area αρ² = π/2, arc 2αρ.
        let b = body(1, GeneratingFunction::Cone { a: 1.0 });
        let cap = cap_at(&b, 1.0).unwrap();
        assert_relative_eq!(cap.enclosed_volume, FRAC_PI_2, max_relative = 1e-12);
        assert_relative_eq!(cap.cap_perimeter, FRAC_PI_2 * SQRT_2, max_relative = 1e-12);
    }

    #[test]
    fn spatial_cone_sector() {
        // Ball of radius √2 in the cone of half-angle π/4 in R³:
        // volume 2π(1 − cos α)ρ³/3, cap area 2π(1 − cos α)ρ².
        let b = body(2, GeneratingFunction::Cone { a: 1.0 });
        let cap = cap_at(&b, 1.0).unwrap();
        let rho = SQRT_2;
        let k = 2.0 * PI * (1.0 - FRAC_PI_4.cos());
        assert_relative_eq!(cap.enclosed_volume, k * rho.powi(3) / 3.0, max_relative = 1e-12);
        assert_relative_eq!(cap.cap_perimeter, k * rho * rho, max_relative = 1e-12);
    }

    #[test]
    fn vanishing_caps() {
        let b = body(2, GeneratingFunction::Hyperbolic { a: 1.0, s: 1.0 });
        let cap = cap_at(&b, 1e-6).unwrap();
        assert!(cap.enclosed_volume < 1e-15 && cap.cap_perimeter < 1e-10);
        assert!(matches!(cap_at(&b, 0.0), Err(FoliationError::InvalidStation(_))));
    }

    #[test]
    fn g_prime_limit_and_threshold() {
        let b = body(1, GeneratingFunction::Hyperbolic { a: 1.0, s: 1.0 });
        assert_relative_eq!(g_prime(&b, 1e6), SQRT_2, max_relative = 1e-10);
        assert_eq!(foliation_threshold(&b).unwrap(), 1.0);
        let cone = body(1, GeneratingFunction::Cone { a: 3.0 });
        assert_relative_eq!(g_prime(&cone, 2.0), 10f64.sqrt(), max_relative = 1e-15);
        assert_eq!(foliation_threshold(&cone).unwrap(), 1.0);
    }

    #[test]
    fn threshold_bisects_sign_change() {
        let xs = ProbeLadder::default().rungs(1e3);
        let x_m = threshold_on_ladder(|x| x - 3.7, &xs).unwrap();
        assert!((x_m - 3.7).abs() <= 1e-10 && x_m > 3.7);
        assert!(matches!(threshold_on_ladder(|_| -1.0, &xs), Err(FoliationError::ThresholdNotFound { .. })));
        // A ladder that starts below the family's scale is foliated from its
        // first rung.
        let b = body(1, GeneratingFunction::ExpCap { a: 2.0, c: 1.0 });
        let ladder = ProbeLadder { start: 1e-3, steps: 40 };
        assert_eq!(foliation_threshold_with(&b, &ladder).unwrap(), 1e-3);
    }

    #[test]
    fn cap_for_volume_inverts_measures() {
        let b = body(1, GeneratingFunction::Cone { a: 1.0 });
        let cap = cap_for_volume(&b, FRAC_PI_2).unwrap();
        assert_relative_eq!(cap.station, 1.0, max_relative = 1e-12);

        let b = body(2, GeneratingFunction::Hyperbolic { a: 1.0, s: 1.0 });
        let v = cap_at(&b, 5.0).unwrap().enclosed_volume;
        let cap = cap_for_volume(&b, v).unwrap();
        assert_relative_eq!(cap.station, 5.0, max_relative = 1e-9);
        assert_relative_eq!(cap.enclosed_volume, v, max_relative = 1e-9);

        let doubled = cap_for_volume(&b, 2.0 * v).unwrap();
        assert!(doubled.station > cap.station);
    }

    #[test]
    fn small_volumes_are_refused() {
        let b = body(2, GeneratingFunction::Hyperbolic { a: 1.0, s: 1.0 });
        let fol = Foliation::new(&b).unwrap();
        assert!(matches!(fol.cap_for_volume(0.5 * fol.min_volume), Err(FoliationError::VolumeTooSmall { .. })));
    }

    #[test]
    fn reference_values() {
        assert_relative_eq!(reference_profile(ReferenceKind::HalfSpace, 1, FRAC_PI_2), PI, max_relative = 1e-14);
        assert_relative_eq!(reference_profile(ReferenceKind::HalfSpace, 2, 2.0 * PI / 3.0), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(reference_profile(ReferenceKind::Cone { a: 1.0 }, 1, 1.0), PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn reference_homogeneity() {
        for n in 1..=4 {
            for kind in [ReferenceKind::HalfSpace, ReferenceKind::Cone { a: 0.5 }, ReferenceKind::Cone { a: 3.0 }] {
                let p = ReferenceProfile { kind, n };
                for &lambda in &[0.5f64, 2.0, 10.0] {
                    let v = 1.7;
                    let lhs = p.perimeter(lambda.powi(n as i32 + 1) * v);
                    let rhs = lambda.powi(n as i32) * p.perimeter(v);
                    assert!((lhs - rhs).abs() <= 1e-10 * rhs);
                }
            }
        }
    }

    #[test]
    fn cone_caps_match_reference() {
        for n in 1..=3 {
            for &a in &[0.5, 1.0, 2.0] {
                let b = body(n, GeneratingFunction::Cone { a });
                let cap = cap_at(&b, 1.3).unwrap();
                let reference = ReferenceProfile::cone(a, n).perimeter(cap.enclosed_volume);
                assert_relative_eq!(cap.cap_perimeter, reference, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn half_space_dominates_cones() {
        for n in 1..=3 {
            let h = ReferenceProfile::half_space(n);
            for &a in &[0.01, 0.3, 1.0, 5.0, 100.0] {
                assert!(ReferenceProfile::cone(a, n).perimeter(2.0) <= h.perimeter(2.0));
            }
        }
    }
}

//! Numerical checks of the large-volume behaviour of a sampled profile.

use serde::{Deserialize, Serialize};

use crate::foliation::ReferenceProfile;
use crate::geometry::{BodyOfRevolution, ConeOfRevolution};

use super::{IsoperimetricEstimate, ProfileCurve, ProfileSolver, SolverError};

/// Below this relative gap, shot and cap perimeters agree to solver
/// accuracy and a further decrease is not resolvable.
pub const CAP_RESOLUTION_FLOOR: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticTolerances {
    /// Allowed relative dip of `P/I_cone` below one.
    pub lower: f64,
    /// Allowed rise of the ratio from the bottom to the top decade.
    pub trend: f64,
    /// Allowed excess of the final ratio over one.
    pub final_excess: f64,
}

impl Default for AsymptoticTolerances {
    fn default() -> Self {
        Self { lower: 1e-6, trend: 1e-6, final_excess: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    /// `(v, P(v)/I_cone(v))` per sample.
    pub ratios: Vec<(f64, f64)>,
    pub min_ratio: f64,
    /// Decades of volume covered.
    pub decades: f64,
    /// Smallest ratio among samples in the lowest decade.
    pub bottom_ratio: f64,
    /// Largest ratio among samples in the highest decade.
    pub top_ratio: f64,
    pub final_excess: f64,
    /// Every ratio is at most its predecessor plus the trend slack.
    pub monotone: bool,
    pub tolerances: AsymptoticTolerances,
}

impl AsymptoticsReport {
    pub fn trend_ok(&self) -> bool {
        self.top_ratio <= self.bottom_ratio + self.tolerances.trend
    }

    pub fn final_ok(&self) -> bool {
        self.final_excess <= self.tolerances.final_excess
    }

    pub fn passed(&self) -> bool {
        self.min_ratio >= 1.0 - self.tolerances.lower && self.trend_ok() && self.final_ok()
    }
}

/// Compares the sampled profile with that of the asymptotic cone. A ratio
/// below one beyond tolerance is reported as an error since the cone
/// profile is a lower bound.
pub fn verify_asymptotics(
    curve: &ProfileCurve,
    cone: &ConeOfRevolution,
    tol: &AsymptoticTolerances,
) -> Result<AsymptoticsReport, SolverError> {
    if curve.samples.is_empty() {
        return Err(SolverError::InvalidInput("profile has no samples".into()));
    }
    let reference = ReferenceProfile::cone(cone.a, curve.n);
    let ratios: Vec<(f64, f64)> =
        curve.samples.iter().map(|e| (e.volume, e.perimeter_upper_bound / reference.perimeter(e.volume))).collect();
    if let Some(&(volume, ratio)) = ratios.iter().find(|(_, r)| *r < 1.0 - tol.lower) {
        return Err(SolverError::LowerBoundViolated { volume, ratio });
    }
    let v_lo = ratios[0].0;
    let v_hi = ratios[ratios.len() - 1].0;
    let bottom_ratio = ratios.iter().filter(|(v, _)| *v <= 10.0 * v_lo).map(|r| r.1).fold(f64::INFINITY, f64::min);
    let top_ratio = ratios.iter().filter(|(v, _)| *v >= v_hi / 10.0).map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(AsymptoticsReport {
        min_ratio: ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
        decades: (v_hi / v_lo).log10(),
        bottom_ratio,
        top_ratio,
        final_excess: ratios[ratios.len() - 1].1 - 1.0,
        monotone: ratios.windows(2).all(|w| w[1].1 <= w[0].1 + tol.trend),
        ratios,
        tolerances: *tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanCurvatureReport {
    /// `(v, H·v^{1/(n+1)})` per sample.
    pub values: Vec<(f64, f64)>,
    pub median: f64,
    pub max: f64,
    /// `max ≤ bound_factor · median`.
    pub bound_factor: f64,
    pub bounded: bool,
    /// `H·v^{1/(n+1)}` for the cone minimizers.
    pub cone_constant: Option<f64>,
    /// Relative deviation of the last sample from the cone constant.
    pub final_deviation: Option<f64>,
}

impl MeanCurvatureReport {
    pub fn passed(&self, final_tol: f64) -> bool {
        self.bounded && self.final_deviation.map_or(true, |d| d <= final_tol)
    }
}

/// Checks that `H(v)·v^{1/(n+1)}` stays bounded along the profile and, when
/// a cone is given, approaches the cone value.
pub fn verify_mean_curvature_bound(
    curve: &ProfileCurve,
    cone: Option<&ConeOfRevolution>,
) -> Result<MeanCurvatureReport, SolverError> {
    if curve.samples.is_empty() {
        return Err(SolverError::InvalidInput("profile has no samples".into()));
    }
    let exponent = 1.0 / (curve.n + 1) as f64;
    let values: Vec<(f64, f64)> =
        curve.samples.iter().map(|e| (e.volume, e.mean_curvature * e.volume.powf(exponent))).collect();
    let mut sorted: Vec<f64> = values.iter().map(|v| v.1).collect();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 { sorted[mid] } else { 0.5 * (sorted[mid - 1] + sorted[mid]) };
    let max = sorted[sorted.len() - 1];
    let bound_factor = 10.0;
    let cone_constant = cone.map(|c| ReferenceProfile::cone(c.a, curve.n).curvature_constant());
    let final_deviation = cone_constant.map(|k| (values[values.len() - 1].1 / k - 1.0).abs());
    Ok(MeanCurvatureReport {
        values,
        median,
        max,
        bound_factor,
        bounded: max <= bound_factor * median,
        cone_constant,
        final_deviation,
    })
}

/// Shot against foliation cap at one volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapComparison {
    pub volume: f64,
    pub shot_perimeter: f64,
    pub cap_perimeter: f64,
    /// `|P_shot − P_cap| / P_cap`.
    pub rel_gap: f64,
    /// Relative mismatch of the sphere centres.
    pub center_gap: f64,
    /// Relative mismatch of the radii.
    pub radius_gap: f64,
}

impl CapComparison {
    pub fn geometry_matches(&self, tol: f64) -> bool {
        self.center_gap <= tol && self.radius_gap <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeVolumeCapsReport {
    pub comparisons: Vec<CapComparison>,
    /// Volumes without one of the two competitors, with the reason.
    pub out_of_regime: Vec<(f64, String)>,
    pub tol: f64,
    /// Gaps do not grow, ignoring changes below [`CAP_RESOLUTION_FLOOR`].
    pub decreasing: bool,
}

impl LargeVolumeCapsReport {
    pub fn final_gap(&self) -> Option<f64> {
        self.comparisons.last().map(|c| c.rel_gap)
    }

    pub fn passed(&self) -> bool {
        self.decreasing && self.final_gap().is_some_and(|g| g <= self.tol)
    }
}

/// Compares shot and cap at every estimate that has both.
pub fn compare_caps(estimates: &[IsoperimetricEstimate], tol: f64) -> LargeVolumeCapsReport {
    let mut comparisons = Vec::new();
    let mut out_of_regime = Vec::new();
    for est in estimates {
        let (shot, cap) = match (est.shot, est.cap) {
            (Some(s), Some(c)) => (s, c),
            (None, _) => {
                out_of_regime.push((est.volume, "no shot solution".into()));
                continue;
            }
            (_, None) => {
                out_of_regime.push((est.volume, "outside the foliated range".into()));
                continue;
            }
        };
        let center_scale = cap.center_height.abs().max(1e-6 * cap.radius);
        comparisons.push(CapComparison {
            volume: est.volume,
            shot_perimeter: shot.perimeter,
            cap_perimeter: cap.cap_perimeter,
            rel_gap: (shot.perimeter - cap.cap_perimeter).abs() / cap.cap_perimeter,
            center_gap: (shot.center_height - cap.center_height).abs() / center_scale,
            radius_gap: (shot.radius - cap.radius).abs() / cap.radius,
        });
    }
    let decreasing = comparisons.windows(2).all(|w| w[1].rel_gap <= w[0].rel_gap.max(CAP_RESOLUTION_FLOOR));
    LargeVolumeCapsReport { comparisons, out_of_regime, tol, decreasing }
}

/// Solves each volume by shooting and compares with the foliation leaf of
/// the same volume. Fails with [`SolverError::CapMismatch`] when the gap at
/// the largest compared volume exceeds `tol`.
pub fn verify_large_volume_caps(
    body: &BodyOfRevolution,
    volumes: &[f64],
    tol: f64,
) -> Result<LargeVolumeCapsReport, SolverError> {
    let solver = ProfileSolver::new(body);
    let mut estimates = Vec::with_capacity(volumes.len());
    let mut failed = Vec::new();
    for &v in volumes {
        match solver.solve(v) {
            Ok(e) => estimates.push(e),
            Err(e) => failed.push((v, e.to_string())),
        }
    }
    let mut report = compare_caps(&estimates, tol);
    report.out_of_regime.extend(failed);
    report.out_of_regime.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(last) = report.comparisons.last() {
        if last.rel_gap > tol {
            return Err(SolverError::CapMismatch { volume: last.volume, gap: last.rel_gap, tol });
        }
    }
    Ok(report)
}

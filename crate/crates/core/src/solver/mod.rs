//! Upper bounds for the isoperimetric profile of a body of revolution.
//!
//! For each volume two competitors are built: a free-boundary CMC
//! hypersurface found by shooting from the axis, and the leaf of the cap
//! foliation with that volume when one exists. The smaller perimeter is the
//! reported upper bound.

mod shot;
mod verify;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::foliation::{Foliation, FoliationCap, FoliationError};
use crate::geometry::{BodyOfRevolution, GeometryError};
use crate::numerics::ode::OdeError;

pub use shot::{
    defect_branches, integrate_shot, orthogonal_shot, solve_shot, CmcProfileOde, CmcShot, Miss, PathPoint, ShotSolution,
    AXIS_LAUNCH, DEFECT_TOL, FALLBACK_SEEDS,
};
pub use verify::{
    compare_caps, verify_asymptotics, verify_large_volume_caps, verify_mean_curvature_bound, AsymptoticTolerances,
    AsymptoticsReport, CapComparison, LargeVolumeCapsReport, MeanCurvatureReport, CAP_RESOLUTION_FLOOR,
};

/// Relative slack when comparing the two competitors' perimeters.
pub const MECHANISM_TIE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("profile from height {start_height} with H = {mean_curvature} never meets the boundary ({miss:?})")]
    NoHit { start_height: f64, mean_curvature: f64, miss: Miss },
    #[error("shooting failed for volume {volume}: {reason}")]
    Diverged { volume: f64, reason: String },
    #[error("no competitor for volume {volume}: shot: {shot}; cap: {cap}")]
    NoCompetitor { volume: f64, shot: String, cap: String },
    #[error("perimeter at volume {volume} lies below the cone profile (ratio {ratio})")]
    LowerBoundViolated { volume: f64, ratio: f64 },
    #[error("shot and cap disagree at volume {volume}: relative gap {gap:e} > {tol:e}")]
    CapMismatch { volume: f64, gap: f64, tol: f64 },
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    Shot,
    FoliationCap,
}

impl Mechanism {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mechanism::Shot => "shot",
            Mechanism::FoliationCap => "foliation-cap",
        }
    }
}

/// Best perimeter found for one volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsoperimetricEstimate {
    pub volume: f64,
    pub perimeter_upper_bound: f64,
    pub mechanism: Mechanism,
    pub mean_curvature: f64,
    pub shot: Option<ShotSolution>,
    pub cap: Option<FoliationCap>,
}

/// Caches per-body data shared by every volume.
#[derive(Debug, Clone)]
pub struct ProfileSolver {
    body: BodyOfRevolution,
    foliation: Result<Foliation, FoliationError>,
}

impl ProfileSolver {
    pub fn new(body: &BodyOfRevolution) -> Self {
        Self { body: *body, foliation: Foliation::new(body) }
    }

    pub fn body(&self) -> &BodyOfRevolution {
        &self.body
    }

    pub fn foliation(&self) -> Option<&Foliation> {
        self.foliation.as_ref().ok()
    }

    pub fn solve(&self, v: f64) -> Result<IsoperimetricEstimate, SolverError> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(SolverError::InvalidInput(format!("volume {v} must be positive")));
        }
        let shot = solve_shot(&self.body, v);
        let cap = match &self.foliation {
            Ok(fol) => fol.cap_for_volume(v),
            Err(e) => Err(e.clone()),
        };
        let use_cap = match (&shot, &cap) {
            (_, Err(_)) => false,
            (Err(_), Ok(_)) => true,
            (Ok(s), Ok(c)) => c.cap_perimeter <= s.perimeter * (1.0 + MECHANISM_TIE_TOL),
        };
        let (shot_opt, cap_opt) = (shot.as_ref().ok().copied(), cap.as_ref().ok().copied());
        if use_cap {
            let c = cap_opt.expect("cap present");
            return Ok(IsoperimetricEstimate {
                volume: v,
                perimeter_upper_bound: c.cap_perimeter,
                mechanism: Mechanism::FoliationCap,
                mean_curvature: c.mean_curvature,
                shot: shot_opt,
                cap: cap_opt,
            });
        }
        match shot {
            Ok(s) => Ok(IsoperimetricEstimate {
                volume: v,
                perimeter_upper_bound: s.perimeter,
                mechanism: Mechanism::Shot,
                mean_curvature: s.mean_curvature,
                shot: shot_opt,
                cap: cap_opt,
            }),
            Err(e) => Err(SolverError::NoCompetitor {
                volume: v,
                shot: e.to_string(),
                cap: cap.err().map(|e| e.to_string()).unwrap_or_default(),
            }),
        }
    }
}

/// Upper bound for the isoperimetric profile at volume `v`.
pub fn solve_volume(body: &BodyOfRevolution, v: f64) -> Result<IsoperimetricEstimate, SolverError> {
    ProfileSolver::new(body).solve(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFailure {
    pub volume: f64,
    pub error: String,
}

/// Sampled upper bounds over an increasing list of volumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub n: usize,
    pub label: String,
    pub samples: Vec<IsoperimetricEstimate>,
    pub failures: Vec<ProfileFailure>,
}

impl ProfileCurve {
    /// `P^{(n+1)/n}` at each sample; concave in `v` for these bodies.
    pub fn renormalized(&self) -> Vec<(f64, f64)> {
        let p = (self.n + 1) as f64 / self.n as f64;
        self.samples.iter().map(|e| (e.volume, e.perimeter_upper_bound.powf(p))).collect()
    }

    pub fn perimeters_non_decreasing(&self, rel_tol: f64) -> bool {
        self.samples.windows(2).all(|w| w[1].perimeter_upper_bound >= w[0].perimeter_upper_bound * (1.0 - rel_tol))
    }

    /// Second divided differences of the renormalized profile, scaled by
    /// `v²/Y` so they are dimensionless. Concavity means none is positive.
    pub fn concavity_defects(&self) -> Vec<f64> {
        let y = self.renormalized();
        y.windows(3)
            .map(|w| {
                let ((v0, y0), (v1, y1), (v2, y2)) = (w[0], w[1], w[2]);
                let d01 = (y1 - y0) / (v1 - v0);
                let d12 = (y2 - y1) / (v2 - v1);
                let dd = 2.0 * (d12 - d01) / (v2 - v0);
                dd * v1 * v1 / y1
            })
            .collect()
    }
}

/// Solves every volume in parallel. Results keep the input order and do
/// not depend on the thread count.
pub fn sample_profile(body: &BodyOfRevolution, volumes: &[f64]) -> Result<ProfileCurve, SolverError> {
    if volumes.is_empty() {
        return Err(SolverError::InvalidInput("empty volume list".into()));
    }
    if let Some(w) = volumes.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(SolverError::InvalidInput(format!("volumes must increase strictly ({} then {})", w[0], w[1])));
    }
    let solver = ProfileSolver::new(body);
    let results: Vec<_> = volumes.par_iter().map(|&v| (v, solver.solve(v))).collect();
    let mut samples = Vec::with_capacity(volumes.len());
    let mut failures = Vec::new();
    for (volume, r) in results {
        match r {
            Ok(e) => samples.push(e),
            Err(e) => {
                log::warn!("{}: volume {volume:e} skipped: {e}", body.label());
                failures.push(ProfileFailure { volume, error: e.to_string() });
            }
        }
    }
    Ok(ProfileCurve { n: body.n, label: body.label(), samples, failures })
}

/// `count` volumes spaced evenly in `log v` over `[v_min, v_max]`.
pub fn log_volumes(v_min: f64, v_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![v_min],
        _ => {
            let (a, b) = (v_min.ln(), v_max.ln());
            (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
        }
    }
}

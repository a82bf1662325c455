//! Axisymmetric constant-mean-curvature profiles launched from the axis.
//!
//! The profile curve is parametrized by arc length `s` with descent angle
//! `θ` (the tangent is `(cos θ, −sin θ)`):
//!
//! ```text
//! dx/ds = cos θ,   dt/ds = −sin θ,   dθ/ds = n·H − (n − 1)·sin θ / x
//! ```
//!
//! so a sphere of radius `ρ` traversed from its top has `H = 1/ρ`. Enclosed
//! volume and area are carried as extra states:
//! `dV/ds = ωₙ xⁿ sin θ` and `dP/ds = n ωₙ xⁿ⁻¹`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::geometry::BodyOfRevolution;
use crate::numerics::ball::unit_ball_volume;
use crate::numerics::ode::{Dopri5, OdeSystem, Termination};
use crate::numerics::quad;
use crate::numerics::roots::{bisect, brent_with_values};

use super::SolverError;

/// Length of the series launch off the axis, as a fraction of `1/H`.
pub const AXIS_LAUNCH: f64 = 1e-4;
/// Largest accepted deviation from orthogonality at the free boundary.
pub const DEFECT_TOL: f64 = 1e-8;
/// Seeds in the fallback scan over start heights.
pub const FALLBACK_SEEDS: usize = 64;

const ODE_TOL: f64 = 1e-10;

/// The profile ODE with state `[x, t, θ, V, P]`.
#[derive(Debug, Clone, Copy)]
pub struct CmcProfileOde {
    pub n: usize,
    pub mean_curvature: f64,
    omega: f64,
}

impl CmcProfileOde {
    pub fn new(n: usize, mean_curvature: f64) -> Self {
        Self { n, mean_curvature, omega: unit_ball_volume(n) }
    }

    /// State at arc length `s` along the series solution off the axis
    /// starting at height `t0`.
    pub fn launch(&self, t0: f64, s: f64) -> [f64; 5] {
        let h = self.mean_curvature;
        let n = self.n as i32;
        let x = s - h * h * s.powi(3) / 6.0;
        let t = t0 - h * s * s / 2.0 + h.powi(3) * s.powi(4) / 24.0;
        let theta = h * s;
        let volume = self.omega * h * s.powi(n + 2) / (n + 2) as f64;
        let perimeter = self.omega * s.powi(n);
        [x, t, theta, volume, perimeter]
    }

    /// `|dθ/ds − (nH − (n−1) sinθ/x)|` for a curve given by `(x, θ)` and its
    /// arc-length derivative of `θ`.
    pub fn residual(&self, x: f64, theta: f64, dtheta: f64) -> f64 {
        let rhs = self.n as f64 * self.mean_curvature - (self.n as f64 - 1.0) * theta.sin() / x;
        (dtheta - rhs).abs()
    }
}

impl OdeSystem<5> for CmcProfileOde {
    fn rhs(&self, _s: f64, y: &[f64; 5], dy: &mut [f64; 5]) {
        let (x, theta) = (y[0], y[2]);
        let (sin, cos) = theta.sin_cos();
        let n = self.n as f64;
        dy[0] = cos;
        dy[1] = -sin;
        dy[2] = n * self.mean_curvature - if self.n > 1 { (n - 1.0) * sin / x } else { 0.0 };
        let xn1 = x.powi(self.n as i32 - 1);
        dy[3] = self.omega * xn1 * x * sin;
        dy[4] = n * self.omega * xn1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub s: f64,
    pub x: f64,
    pub t: f64,
    pub theta: f64,
}

/// One integrated profile from the axis to the boundary of the body.
#[derive(Debug, Clone, PartialEq)]
pub struct CmcShot {
    pub start_height: f64,
    pub mean_curvature: f64,
    pub path: Vec<PathPoint>,
    pub hit_station: f64,
    pub hit_height: f64,
    /// Descent angle at the hit.
    pub hit_angle: f64,
    /// Signed deviation from orthogonality at the hit, in radians.
    pub boundary_angle_defect: f64,
    /// Volume enclosed between the profile and the contact height.
    pub dome_volume: f64,
    /// Area of the hypersurface swept by the profile.
    pub dome_perimeter: f64,
}

impl CmcShot {
    /// Centre height and radius of the axis-centred sphere through the hit
    /// point with the integrated tangent there.
    pub fn hit_circle(&self) -> (f64, f64) {
        let (sin, cos) = self.hit_angle.sin_cos();
        let radius = self.hit_station / sin;
        (self.hit_height - radius * cos, radius)
    }
}

/// How a profile left the integration window without meeting the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Miss {
    /// Returned to the axis inside the body.
    ClosedOnAxis,
    /// Ran out of arc length.
    Escaped,
}

/// Defect `θ − (π/2 − atan f′(x))` of a profile crossing the graph at `x`.
fn defect(body: &BodyOfRevolution, x: f64, theta: f64) -> f64 {
    theta - (FRAC_PI_2 - body.profile.slope(x).atan())
}

pub(crate) fn trace(body: &BodyOfRevolution, t0: f64, h: f64, record: bool) -> Result<Result<CmcShot, Miss>, SolverError> {
    if !(t0 > 0.0 && t0.is_finite()) || !(h > 0.0 && h.is_finite()) {
        return Err(SolverError::InvalidInput(format!("start height {t0} and curvature {h} must be positive")));
    }
    let ode = CmcProfileOde::new(body.n, h);
    let f = &body.profile;
    let rho = 1.0 / h;
    let s0 = AXIS_LAUNCH * rho;
    let gap = |y: &[f64; 5]| y[1] - f.value(y[0]);
    let start = ode.launch(t0, s0);

    if gap(&start) <= 0.0 {
        // The boundary is met within the series segment.
        let s_hit = bisect(|s| gap(&ode.launch(t0, s)), 0.0, s0, 1e-16 * rho, 200)
            .map_err(|e| SolverError::InvalidInput(format!("launch segment: {e}")))?;
        let y = ode.launch(t0, s_hit);
        return Ok(Ok(CmcShot {
            start_height: t0,
            mean_curvature: h,
            path: vec![PathPoint { s: 0.0, x: 0.0, t: t0, theta: 0.0 }, PathPoint { s: s_hit, x: y[0], t: y[1], theta: y[2] }],
            hit_station: y[0],
            hit_height: y[1],
            hit_angle: y[2],
            boundary_angle_defect: defect(body, y[0], y[2]),
            dome_volume: y[3],
            dome_perimeter: y[4],
        }));
    }

    let integrator = Dopri5 { rtol: ODE_TOL, atol: ODE_TOL * rho.min(1.0), h_init: s0, record, ..Dopri5::default() };
    let s_end = 1.1 * PI * rho;
    let axis_floor = 1e-7 * rho;
    let sol = integrator.solve_with(
        &ode,
        s0,
        start,
        s_end,
        |_, y| gap(y),
        |_, y| y[2] > FRAC_PI_2 && (y[0] < axis_floor || y[2] >= PI - 1e-9),
    )?;
    match sol.termination {
        Termination::Event => {
            let (_, y) = sol.last();
            let mut path = Vec::with_capacity(sol.samples.len() + 1);
            path.push(PathPoint { s: 0.0, x: 0.0, t: t0, theta: 0.0 });
            path.extend(sol.samples.iter().map(|(s, y)| PathPoint { s: *s, x: y[0], t: y[1], theta: y[2] }));
            Ok(Ok(CmcShot {
                start_height: t0,
                mean_curvature: h,
                path,
                hit_station: y[0],
                hit_height: y[1],
                hit_angle: y[2],
                boundary_angle_defect: defect(body, y[0], y[2]),
                dome_volume: y[3],
                dome_perimeter: y[4],
            }))
        }
        Termination::Stopped => Ok(Err(Miss::ClosedOnAxis)),
        Termination::Reached => Ok(Err(Miss::Escaped)),
    }
}

/// Integrates the profile starting on the axis at height `t0` with mean
/// curvature `h` until it crosses the boundary of the body.
pub fn integrate_shot(body: &BodyOfRevolution, t0: f64, h: f64) -> Result<CmcShot, SolverError> {
    trace(body, t0, h, true)?.map_err(|miss| SolverError::NoHit { start_height: t0, mean_curvature: h, miss })
}

/// Volume of the body below height `f(x)`: `ωₙ ∫₀^x sⁿ f′(s) ds`.
pub(crate) fn lower_volume(body: &BodyOfRevolution, x: f64) -> f64 {
    let n = body.n as i32;
    let f = &body.profile;
    unit_ball_volume(body.n) * quad::integrate(|s: f64| s.powi(n) * f.slope(s), 0.0, x, 1e-12, 0.0).value
}

/// A free-boundary CMC hypersurface found by shooting, with its measures.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ShotSolution {
    pub start_height: f64,
    pub mean_curvature: f64,
    pub hit_station: f64,
    pub hit_height: f64,
    pub boundary_angle_defect: f64,
    /// Centre height of the sphere reconstructed from the hit.
    pub center_height: f64,
    /// Radius of the sphere reconstructed from the hit.
    pub radius: f64,
    pub volume: f64,
    pub perimeter: f64,
}

impl ShotSolution {
    fn from_shot(body: &BodyOfRevolution, shot: &CmcShot) -> Self {
        let (center_height, radius) = shot.hit_circle();
        Self {
            start_height: shot.start_height,
            mean_curvature: shot.mean_curvature,
            hit_station: shot.hit_station,
            hit_height: shot.hit_height,
            boundary_angle_defect: shot.boundary_angle_defect,
            center_height,
            radius,
            volume: shot.dome_volume + lower_volume(body, shot.hit_station),
            perimeter: shot.dome_perimeter,
        }
    }
}

/// Defect as a continuous function of the start height: a profile that
/// closes on the axis inside the body counts as `+π/2`, the limit reached
/// when the sphere grazes the boundary.
fn extended_defect(body: &BodyOfRevolution, t0: f64, h: f64) -> Result<f64, SolverError> {
    match trace(body, t0, h, false)? {
        Ok(shot) => Ok(shot.boundary_angle_defect),
        Err(Miss::ClosedOnAxis) => Ok(FRAC_PI_2),
        Err(Miss::Escaped) => Err(SolverError::NoHit { start_height: t0, mean_curvature: h, miss: Miss::Escaped }),
    }
}

/// Sign-change brackets of the defect over `seeds` start heights in
/// `(0, top]`.
pub fn defect_branches(body: &BodyOfRevolution, h: f64, top: f64, seeds: usize) -> Result<Vec<(f64, f64)>, SolverError> {
    let mut brackets = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=seeds {
        let t0 = top * k as f64 / seeds as f64;
        let d = extended_defect(body, t0, h)?;
        if let Some((t_prev, d_prev)) = prev {
            if d_prev < 0.0 && d >= 0.0 {
                brackets.push((t_prev, t0));
            }
        }
        prev = Some((t0, d));
    }
    Ok(brackets)
}

/// The start height at which the profile of curvature `h` meets the
/// boundary orthogonally.
pub fn orthogonal_shot(body: &BodyOfRevolution, h: f64) -> Result<ShotSolution, SolverError> {
    let rho = 1.0 / h;
    let lo = 1e-6 * rho;
    let d_lo = extended_defect(body, lo, h)?;
    if d_lo >= 0.0 {
        return Err(SolverError::Diverged { volume: f64::NAN, reason: format!("defect {d_lo} is not negative near the vertex at H = {h}") });
    }
    let mut hi = rho;
    let mut d_hi = extended_defect(body, hi, h)?;
    let mut doublings = 0;
    while d_hi < 0.0 {
        doublings += 1;
        if doublings > 60 {
            return Err(SolverError::Diverged { volume: f64::NAN, reason: format!("no start-height bracket at H = {h}") });
        }
        hi *= 2.0;
        d_hi = extended_defect(body, hi, h)?;
    }

    let mut eval_err = None;
    let root = brent_with_values(
        |t0| match extended_defect(body, t0, h) {
            Ok(d) => d,
            Err(e) => {
                eval_err.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        d_lo,
        hi,
        d_hi,
        1e-14 * rho,
        200,
    );
    if let Some(e) = eval_err {
        return Err(e);
    }
    let t0 = match root {
        Ok(r) if r.fx.abs() < DEFECT_TOL => r.x,
        _ => fallback_start_height(body, h, hi)?,
    };
    let shot = integrate_shot(body, t0, h)?;
    if shot.boundary_angle_defect.abs() >= DEFECT_TOL {
        return Err(SolverError::Diverged {
            volume: f64::NAN,
            reason: format!("defect {:e} at H = {h} exceeds {DEFECT_TOL:e}", shot.boundary_angle_defect),
        });
    }
    Ok(ShotSolution::from_shot(body, &shot))
}

fn fallback_start_height(body: &BodyOfRevolution, h: f64, top: f64) -> Result<f64, SolverError> {
    let brackets = defect_branches(body, h, top, FALLBACK_SEEDS)?;
    if brackets.len() > 1 {
        log::warn!("{} orthogonal branches at H = {h} for {}; taking the lowest", brackets.len(), body.label());
    }
    let &(a, b) = brackets.first().ok_or_else(|| SolverError::Diverged {
        volume: f64::NAN,
        reason: format!("no orthogonal branch among {FALLBACK_SEEDS} seeds at H = {h}"),
    })?;
    let root = crate::numerics::roots::brent(|t0| extended_defect(body, t0, h).unwrap_or(f64::NAN), a, b, 1e-14 / h, 200)
        .map_err(|e| SolverError::Diverged { volume: f64::NAN, reason: e.to_string() })?;
    Ok(root.x)
}

/// Shoots for the free-boundary CMC hypersurface enclosing volume `v`:
/// outer root-find on `log H`, inner root-find on the start height.
pub fn solve_shot(body: &BodyOfRevolution, v: f64) -> Result<ShotSolution, SolverError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(SolverError::InvalidInput(format!("volume {v} must be positive")));
    }
    let diverged = |reason: String| SolverError::Diverged { volume: v, reason };
    let guess = crate::foliation::ReferenceProfile::half_space(body.n).mean_curvature(v);
    let log_v = v.ln();
    let eval = |log_h: f64| -> Result<f64, SolverError> { Ok(orthogonal_shot(body, log_h.exp())?.volume.ln() - log_v) };

    let (mut a, mut b) = (guess.ln(), guess.ln());
    let (mut ga, mut gb) = (eval(a)?, 0.0);
    // Volume decreases with H.
    let step = if ga > 0.0 { std::f64::consts::LN_2 } else { -std::f64::consts::LN_2 };
    let mut found = false;
    for _ in 0..60 {
        b = a + step;
        gb = eval(b)?;
        if gb == 0.0 || gb.signum() != ga.signum() {
            found = true;
            break;
        }
        a = b;
        ga = gb;
    }
    if !found {
        return Err(diverged("no mean-curvature bracket".into()));
    }

    let mut inner_err = None;
    let root = brent_with_values(
        |log_h| match eval(log_h) {
            Ok(g) => g,
            Err(e) => {
                inner_err.get_or_insert(e);
                f64::NAN
            }
        },
        a,
        ga,
        b,
        gb,
        1e-15,
        200,
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    let root = root.map_err(|e| diverged(e.to_string()))?;
    let sol = orthogonal_shot(body, root.x.exp())?;
    if (sol.volume / v - 1.0).abs() > 1e-9 {
        return Err(diverged(format!("volume mismatch {:e}", sol.volume / v - 1.0)));
    }
    Ok(sol)
}

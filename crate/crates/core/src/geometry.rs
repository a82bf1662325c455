//! Generating functions, bodies of revolution and their asymptotic cones.
//!
//! A body of revolution is the epigraph `{(x, y) ∈ Rⁿ × R : y ≥ f(|x|)}` of a
//! convex generating function with `f(0) = 0`. When `f` has an affine
//! asymptote `y = a·x + b` with `a > 0` the body is conically bounded: its
//! exterior asymptotic cone is `{y ≥ a|x| + b}`, a translate of the
//! asymptotic cone `{y ≥ a|x|}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown family {0:?} (expected hyperbolic, exp-cap, cone, exp or parabola)")]
    UnknownFamily(String),
    #[error("dimension n = {0} is invalid; the boundary dimension must be at least 1")]
    InvalidDimension(usize),
    #[error("generating function violates {property} at x = {x}")]
    InvariantViolation { property: &'static str, x: f64 },
    #[error("no affine asymptote ({reason}) near x = {x:e}; the body is not conically bounded")]
    NoAsymptote { x: f64, reason: String },
    #[error("asymptotic slope a = {a:e} is degenerate; a convex body of revolution cannot be asymptotic to a half-space")]
    DegenerateSlope { a: f64 },
    #[error("dilates μ⁻¹f(μx) fail to increase to a·x at x = {x}, μ = {mu:e}")]
    ConeCrossCheck { x: f64, mu: f64 },
    #[error("radial gap {gap:e} at height {height:e} does not decay below {tol:e}; not conically bounded")]
    NotConicallyBounded { height: f64, gap: f64, tol: f64 },
    #[error("height {0} is negative")]
    NegativeHeight(f64),
}

/// Smooth convex profile `f: [0, ∞) → [0, ∞)` with analytic derivatives.
///
/// Only registered families are supported; each is closed under the
/// dilation `f ↦ λ·f(·/λ)`, which generates the body `λC`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratingFunction {
    /// `√(a²x² + s²) − s`
    Hyperbolic { a: f64, s: f64 },
    /// `a(x + c·e^{−x/c} − c)`
    ExpCap { a: f64, c: f64 },
    /// `a·x`, the cone itself (not smooth at the vertex).
    Cone { a: f64 },
    /// `l(e^{x/l} − 1)`; convex but without an affine asymptote.
    Exp { l: f64 },
    /// `k·x²`
    Parabola { k: f64 },
}

/// Optional parameters for [`GeneratingFunction::preset`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub s: Option<f64>,
    pub k: Option<f64>,
}

impl GeneratingFunction {
    /// Looks up a registered family by name. Missing parameters default to 1.
    pub fn preset(name: &str, params: &FamilyParams) -> Result<Self, GeometryError> {
        let a = params.a.unwrap_or(1.0);
        let f = match name {
            "hyperbolic" => Self::Hyperbolic { a, s: params.s.unwrap_or(1.0) },
            "exp-cap" => Self::ExpCap { a, c: params.c.unwrap_or(1.0) },
            "cone" => Self::Cone { a },
            "exp" => Self::Exp { l: params.s.unwrap_or(1.0) },
            "parabola" => Self::Parabola { k: params.k.unwrap_or(1.0) },
            other => return Err(GeometryError::UnknownFamily(other.to_string())),
        };
        f.check_parameters()?;
        Ok(f)
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Hyperbolic { .. } => "hyperbolic",
            Self::ExpCap { .. } => "exp-cap",
            Self::Cone { .. } => "cone",
            Self::Exp { .. } => "exp",
            Self::Parabola { .. } => "parabola",
        }
    }

    fn check_parameters(&self) -> Result<(), GeometryError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(GeometryError::InvalidParameter(format!("{name} = {v} must be positive and finite")))
            }
        };
        match *self {
            Self::Hyperbolic { a, s } => positive("a", a).and(positive("s", s)),
            Self::ExpCap { a, c } => positive("a", a).and(positive("c", c)),
            Self::Cone { a } => positive("a", a),
            Self::Exp { l } => positive("l", l),
            Self::Parabola { k } => positive("k", k),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Self::Hyperbolic { a, s } => {
                let ax = a * x;
                ax * ax / ((ax * ax + s * s).sqrt() + s)
            }
            Self::ExpCap { a, c } => {
                let u = x / c;
                a * c * (u + (-u).exp_m1())
            }
            Self::Cone { a } => a * x,
            Self::Exp { l } => l * (x / l).exp_m1(),
            Self::Parabola { k } => k * x * x,
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        match *self {
            Self::Hyperbolic { a, s } => a * a * x / ((a * x).powi(2) + s * s).sqrt(),
            Self::ExpCap { a, c } => -a * (-x / c).exp_m1(),
            Self::Cone { a } => a,
            Self::Exp { l } => (x / l).exp(),
            Self::Parabola { k } => 2.0 * k * x,
        }
    }

    pub fn curvature(&self, x: f64) -> f64 {
        match *self {
            Self::Hyperbolic { a, s } => {
                let q = (a * x).powi(2) + s * s;
                a * a * s * s / (q * q.sqrt())
            }
            Self::ExpCap { a, c } => a / c * (-x / c).exp(),
            Self::Cone { .. } => 0.0,
            Self::Exp { l } => (x / l).exp() / l,
            Self::Parabola { k } => 2.0 * k,
        }
    }

    /// Natural length scale of the family.
    pub fn length_scale(&self) -> f64 {
        match *self {
            Self::Hyperbolic { a, s } => s / a,
            Self::ExpCap { c, .. } => c,
            Self::Cone { .. } => 1.0,
            Self::Exp { l } => l,
            Self::Parabola { k } => 1.0 / k,
        }
    }

    /// Largest abscissa used when probing limits at infinity.
    pub fn domain_hint(&self) -> f64 {
        match *self {
            Self::Exp { l } => 600.0 * l,
            _ => 1e8 * self.length_scale().max(1.0),
        }
    }

    /// Synthetic inputs (cone, exponential) are not normalized with
    /// `f′(0) = 0`.
    pub fn is_normalized(&self) -> bool {
        !matches!(self, Self::Cone { .. } | Self::Exp { .. })
    }

    /// Generating function of the dilated body `λC`: `x ↦ λ·f(x/λ)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        match *self {
            Self::Hyperbolic { a, s } => Self::Hyperbolic { a, s: s * lambda },
            Self::ExpCap { a, c } => Self::ExpCap { a, c: c * lambda },
            Self::Cone { a } => Self::Cone { a },
            Self::Exp { l } => Self::Exp { l: l * lambda },
            Self::Parabola { k } => Self::Parabola { k: k / lambda },
        }
    }

    /// Audits `f(0) = 0`, `f′(0) = 0` (normalized families), `f″ ≥ 0`,
    /// monotone `f′` and three-point convexity on a probe set.
    pub fn validate(&self) -> Result<(), GeometryError> {
        self.check_parameters()?;
        if self.value(0.0) != 0.0 {
            return Err(GeometryError::InvariantViolation { property: "f(0) = 0", x: 0.0 });
        }
        if self.is_normalized() && self.slope(0.0) != 0.0 {
            return Err(GeometryError::InvariantViolation { property: "f'(0) = 0", x: 0.0 });
        }
        let probes = self.audit_probes();
        for &x in &probes {
            if self.curvature(x) < 0.0 {
                return Err(GeometryError::InvariantViolation { property: "f'' >= 0", x });
            }
        }
        for w in probes.windows(2) {
            if self.slope(w[1]) < self.slope(w[0]) {
                return Err(GeometryError::InvariantViolation { property: "f' non-decreasing", x: w[1] });
            }
        }
        for w in probes.windows(3) {
            let (x1, x2, x3) = (w[0], w[1], w[2]);
            let (f1, f2, f3) = (self.value(x1), self.value(x2), self.value(x3));
            let chord = f1 + (f3 - f1) * (x2 - x1) / (x3 - x1);
            if f2 > chord + 1e-12 * chord.abs().max(f64::MIN_POSITIVE) {
                return Err(GeometryError::InvariantViolation { property: "convexity", x: x2 });
            }
        }
        Ok(())
    }

    fn audit_probes(&self) -> Vec<f64> {
        let scale = self.length_scale();
        let top = self.domain_hint().min(1e4 * scale);
        let mut xs: Vec<f64> = (0..=64).map(|i| 4.0 * scale * i as f64 / 64.0).collect();
        let mut x = 4.0 * scale;
        while x < top {
            x *= 1.25;
            xs.push(x.min(top));
        }
        xs.dedup();
        xs
    }
}

/// The convex body `{(x, y) ∈ Rⁿ × R : y ≥ f(|x|)}` in `Rⁿ⁺¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyOfRevolution {
    /// Boundary dimension; the ambient space is `Rⁿ⁺¹`.
    pub n: usize,
    pub profile: GeneratingFunction,
}

impl BodyOfRevolution {
    pub fn new(n: usize, profile: GeneratingFunction) -> Result<Self, GeometryError> {
        if n == 0 {
            return Err(GeometryError::InvalidDimension(n));
        }
        profile.validate()?;
        Ok(Self { n, profile })
    }

    pub fn dilate(&self, lambda: f64) -> Self {
        Self { n: self.n, profile: self.profile.dilate(lambda) }
    }

    pub fn label(&self) -> String {
        match self.profile {
            GeneratingFunction::Hyperbolic { a, s } => format!("hyperbolic(a={a},s={s},n={})", self.n),
            GeneratingFunction::ExpCap { a, c } => format!("exp-cap(a={a},c={c},n={})", self.n),
            GeneratingFunction::Cone { a } => format!("cone(a={a},n={})", self.n),
            GeneratingFunction::Exp { l } => format!("exp(l={l},n={})", self.n),
            GeneratingFunction::Parabola { k } => format!("parabola(k={k},n={})", self.n),
        }
    }
}

/// Affine asymptote `y = a·x + b` of a generating function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteData {
    pub a: f64,
    pub b: f64,
    /// `|f(X) − (aX + b)|` at the largest probe `X`.
    pub residual: f64,
}

/// The cone of revolution `{y ≥ a|x| + vertex_height}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeOfRevolution {
    pub n: usize,
    pub a: f64,
    pub vertex_height: f64,
}

impl ConeOfRevolution {
    /// Radius of the slice at height `t` of the cone with its vertex
    /// translated to `vertex_height`.
    pub fn radius_at(&self, t: f64) -> f64 {
        ((t - self.vertex_height) / self.a).max(0.0)
    }

    /// The vertex-normalized cone `{y ≥ a|x|}` as a body of revolution.
    pub fn as_body(&self) -> BodyOfRevolution {
        BodyOfRevolution { n: self.n, profile: GeneratingFunction::Cone { a: self.a } }
    }
}

/// Geometric probe ladder `start·2ᵏ`, `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeLadder {
    pub start: f64,
    pub steps: usize,
}

impl Default for ProbeLadder {
    fn default() -> Self {
        Self { start: 1.0, steps: 40 }
    }
}

impl ProbeLadder {
    pub fn rungs(&self, limit: f64) -> Vec<f64> {
        (0..=self.steps)
            .map(|k| self.start * 2f64.powi(k as i32))
            .take_while(|&x| x <= limit)
            .collect()
    }
}

pub const DEFAULT_ASYMPTOTE_TOL: f64 = 1e-8;
/// Slope growth between the last two rungs that marks a missing asymptote.
pub const SLOPE_GROWTH_TOL: f64 = 1e-6;

/// Polynomial extrapolation to `h = 0` in `h = 1/x` over sliding windows of
/// four rungs; keeps the window whose last two extrapolants agree best.
fn richardson_limit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    const WINDOW: usize = 4;
    let mut best = (ys[ys.len() - 1], f64::INFINITY);
    if xs.len() < WINDOW {
        return best;
    }
    for start in 0..=xs.len() - WINDOW {
        let hs: Vec<f64> = xs[start..start + WINDOW].iter().map(|x| 1.0 / x).collect();
        let mut table: Vec<f64> = ys[start..start + WINDOW].to_vec();
        let mut previous = table[WINDOW - 1];
        for level in 1..WINDOW {
            previous = table[WINDOW - 1];
            for i in (level..WINDOW).rev() {
                let (h_far, h_near) = (hs[i - level], hs[i]);
                table[i] = (h_far * table[i] - h_near * table[i - 1]) / (h_far - h_near);
            }
        }
        let value = table[WINDOW - 1];
        let err = (value - previous).abs();
        if err <= best.1 {
            best = (value, err);
        }
    }
    best
}

/// Estimates the affine asymptote with the default probe ladder.
pub fn detect_asymptote(f: &GeneratingFunction, tol: f64) -> Result<AsymptoteData, GeometryError> {
    detect_asymptote_with(f, tol, &ProbeLadder::default())
}

pub fn detect_asymptote_with(f: &GeneratingFunction, tol: f64, ladder: &ProbeLadder) -> Result<AsymptoteData, GeometryError> {
    let xs = ladder.rungs(f.domain_hint());
    if xs.len() < 4 {
        return Err(GeometryError::InvalidParameter(format!(
            "probe ladder from {} reaches only {} rungs below {}",
            ladder.start,
            xs.len(),
            f.domain_hint()
        )));
    }
    let slopes: Vec<f64> = xs.iter().map(|&x| f.slope(x)).collect();
    let values: Vec<f64> = xs.iter().map(|&x| f.value(x)).collect();
    if let Some(i) = slopes.iter().zip(&values).position(|(d, v)| !d.is_finite() || !v.is_finite()) {
        return Err(GeometryError::NoAsymptote { x: xs[i], reason: "profile overflows".into() });
    }
    let last = xs.len() - 1;
    let growth = slopes[last] - slopes[last - 1];
    if growth > SLOPE_GROWTH_TOL {
        return Err(GeometryError::NoAsymptote {
            x: xs[last],
            reason: format!("slope still grows by {growth:e} between the last two probes"),
        });
    }
    let (a, _) = richardson_limit(&xs, &slopes);
    if a <= tol {
        return Err(GeometryError::DegenerateSlope { a });
    }
    let offsets: Vec<f64> = xs.iter().zip(&values).map(|(&x, &v)| v - a * x).collect();
    let (b, _) = richardson_limit(&xs, &offsets);
    let x_top = xs[last];
    let residual = (values[last] - (a * x_top + b)).abs();
    // f(X) − aX cannot be resolved below the rounding of f(X) itself.
    let limit = tol * (1.0 + b.abs()) + 8.0 * f64::EPSILON * values[last].abs();
    if residual > limit {
        return Err(GeometryError::NoAsymptote {
            x: x_top,
            reason: format!("residual {residual:e} exceeds {limit:e}"),
        });
    }
    Ok(AsymptoteData { a, b, residual })
}

/// Asymptotic cone of the body, cross-checked against the monotone
/// convergence of the dilates `μ⁻¹f(μx)` to `a·x`.
pub fn asymptotic_cone(body: &BodyOfRevolution) -> Result<ConeOfRevolution, GeometryError> {
    let f = &body.profile;
    let asym = detect_asymptote(f, DEFAULT_ASYMPTOTE_TOL)?;
    let hint = f.domain_hint();
    for &x in &[0.5, 1.0, 2.0] {
        let mut prev = f64::NEG_INFINITY;
        let mut mu = 1.0;
        let mut last = (mu, f.value(x));
        while mu * x <= hint {
            let dilate = f.value(mu * x) / mu;
            if dilate < prev - 1e-12 * prev.abs() {
                return Err(GeometryError::ConeCrossCheck { x, mu });
            }
            prev = dilate;
            last = (mu, dilate);
            mu *= 2.0;
        }
        if (last.1 - asym.a * x).abs() > 1e-6 * asym.a * x {
            return Err(GeometryError::ConeCrossCheck { x, mu: last.0 });
        }
    }
    Ok(ConeOfRevolution { n: body.n, a: asym.a, vertex_height: asym.b })
}

/// Radius `f⁻¹(t)` of the slice `C_t`, by bisection.
pub fn radial_slice(body: &BodyOfRevolution, t: f64) -> Result<f64, GeometryError> {
    if t < 0.0 || t.is_nan() {
        return Err(GeometryError::NegativeHeight(t));
    }
    Ok(inverse_profile(&body.profile, t))
}

pub(crate) fn inverse_profile(f: &GeneratingFunction, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = f.length_scale().max(1.0);
    while f.value(hi) < t {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f.value(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Radial distance between the slices of the body and of its exterior cone,
/// `|f⁻¹(t) − (t − b)/a|`, at each height. The gaps must decrease and fall
/// below `tol` at the largest height.
pub fn conical_boundedness_gap(
    body: &BodyOfRevolution,
    cone: &ConeOfRevolution,
    heights: &[f64],
    tol: f64,
) -> Result<Vec<f64>, GeometryError> {
    if heights.is_empty() || heights.iter().any(|&t| !(t > 0.0)) || heights.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GeometryError::InvalidParameter("heights must be positive and strictly increasing".into()));
    }
    let mut gaps = Vec::with_capacity(heights.len());
    for &t in heights {
        gaps.push((radial_slice(body, t)? - cone.radius_at(t)).abs());
    }
    for (i, w) in gaps.windows(2).enumerate() {
        if w[1] > w[0] + 1e-9 * (1.0 + w[0]) {
            return Err(GeometryError::NotConicallyBounded { height: heights[i + 1], gap: w[1], tol });
        }
    }
    let (&t_top, &g_top) = (heights.last().unwrap(), gaps.last().unwrap());
    if g_top > tol {
        return Err(GeometryError::NotConicallyBounded { height: t_top, gap: g_top, tol });
    }
    Ok(gaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hyperbolic(n: usize) -> BodyOfRevolution {
        BodyOfRevolution::new(n, GeneratingFunction::Hyperbolic { a: 1.0, s: 1.0 }).unwrap()
    }

    #[test]
    fn hyperbolic_asymptote() {
        let asym = detect_asymptote(&GeneratingFunction::Hyperbolic { a: 1.0, s: 1.0 }, 1e-8).unwrap();
        assert_relative_eq!(asym.a, 1.0, max_relative = 1e-10);
        assert_relative_eq!(asym.b, -1.0, max_relative = 1e-8);
    }

    #[test]
    fn exp_cap_asymptote() {
        let asym = detect_asymptote(&GeneratingFunction::ExpCap { a: 2.0, c: 1.0 }, 1e-8).unwrap();
        assert_relative_eq!(asym.a, 2.0, max_relative = 1e-12);
        assert_relative_eq!(asym.b, -2.0, max_relative = 1e-9);
    }

    #[test]
    fn exponential_has_no_asymptote() {
        let err = detect_asymptote(&GeneratingFunction::Exp { l: 1.0 }, 1e-8).unwrap_err();
        assert!(matches!(err, GeometryError::NoAsymptote { .. }), "{err}");
        let err = detect_asymptote(&GeneratingFunction::Parabola { k: 1.0 }, 1e-8).unwrap_err();
        assert!(matches!(err, GeometryError::NoAsymptote { .. }), "{err}");
    }

    #[test]
    fn flat_slope_is_degenerate() {
        // Tiny slope: a far below the tolerance.
        let err = detect_asymptote(&GeneratingFunction::Cone { a: 1e-10 }, 1e-8).unwrap_err();
        assert!(matches!(err, GeometryError::DegenerateSlope { .. }));
    }

    #[test]
    fn cone_is_its_own_asymptotic_cone() {
        let body = BodyOfRevolution::new(2, GeneratingFunction::Cone { a: 3.0 }).unwrap();
        let cone = asymptotic_cone(&body).unwrap();
        assert_eq!(cone.a, 3.0);
        assert_eq!(cone.vertex_height, 0.0);
    }

    #[test]
    fn cones_of_smooth_families() {
        let cone = asymptotic_cone(&hyperbolic(1)).unwrap();
        assert_relative_eq!(cone.a, 1.0, max_relative = 1e-10);
        assert_relative_eq!(cone.vertex_height, -1.0, max_relative = 1e-8);
        let body = BodyOfRevolution::new(1, GeneratingFunction::ExpCap { a: 2.0, c: 1.0 }).unwrap();
        let cone = asymptotic_cone(&body).unwrap();
        assert_relative_eq!(cone.a, 2.0, max_relative = 1e-10);
        assert_relative_eq!(cone.vertex_height, -2.0, max_relative = 1e-8);
    }

    #[test]
    fn radial_slices() {
        let body = hyperbolic(1);
        assert_eq!(radial_slice(&body, 0.0).unwrap(), 0.0);
        assert!((radial_slice(&body, 1.0).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        let cone = BodyOfRevolution::new(1, GeneratingFunction::Cone { a: 2.0 }).unwrap();
        assert!((radial_slice(&cone, 5.0).unwrap() - 2.5).abs() < 1e-12);
        assert!(matches!(radial_slice(&body, -1.0), Err(GeometryError::NegativeHeight(_))));
    }

    #[test]
    fn gaps_decay_for_hyperbolic_body() {
        let body = hyperbolic(1);
        let cone = asymptotic_cone(&body).unwrap();
        let heights = [10.0, 100.0, 1000.0];
        let gaps = conical_boundedness_gap(&body, &cone, &heights, 1e-2).unwrap();
        // f⁻¹(t) = √(t² + 2t) against the exterior cone radius t + 1.
        for (g, t) in gaps.iter().zip(heights) {
            let exact = t + 1.0 - (t * t + 2.0 * t).sqrt();
            assert!((g - exact).abs() < 1e-7, "{g} vs {exact}");
        }
        assert_relative_eq!(gaps[0], 4.554_884_989_667_7e-2, max_relative = 1e-8);
        assert_relative_eq!(gaps[2], 4.995_006_241_263e-4, max_relative = 1e-6);
    }

    #[test]
    fn gaps_vanish_for_cone() {
        let body = BodyOfRevolution::new(1, GeneratingFunction::Cone { a: 0.5 }).unwrap();
        let cone = asymptotic_cone(&body).unwrap();
        let gaps = conical_boundedness_gap(&body, &cone, &[1.0, 10.0, 100.0], 1e-9).unwrap();
        assert!(gaps.iter().all(|&g| g < 1e-11), "{gaps:?}");
    }

    #[test]
    fn exponential_is_not_conically_bounded() {
        let body = BodyOfRevolution::new(1, GeneratingFunction::Exp { l: 1.0 }).unwrap();
        let candidate = ConeOfRevolution { n: 1, a: 1.0, vertex_height: 0.0 };
        let err = conical_boundedness_gap(&body, &candidate, &[10.0, 100.0, 1000.0], 1e-2).unwrap_err();
        assert!(matches!(err, GeometryError::NotConicallyBounded { .. }));
    }

    #[test]
    fn registry_and_validation() {
        let p = FamilyParams { a: Some(2.0), s: Some(3.0), ..Default::default() };
        assert_eq!(GeneratingFunction::preset("hyperbolic", &p).unwrap(), GeneratingFunction::Hyperbolic { a: 2.0, s: 3.0 });
        assert!(matches!(GeneratingFunction::preset("torus", &p), Err(GeometryError::UnknownFamily(_))));
        let bad = FamilyParams { a: Some(-1.0), ..Default::default() };
        assert!(GeneratingFunction::preset("cone", &bad).is_err());
        assert!(matches!(BodyOfRevolution::new(0, GeneratingFunction::Cone { a: 1.0 }), Err(GeometryError::InvalidDimension(0))));
    }

    #[test]
    fn dilation_matches_definition() {
        let fams = [
            GeneratingFunction::Hyperbolic { a: 1.5, s: 0.7 },
            GeneratingFunction::ExpCap { a: 2.0, c: 1.3 },
            GeneratingFunction::Cone { a: 0.5 },
            GeneratingFunction::Exp { l: 1.0 },
            GeneratingFunction::Parabola { k: 2.0 },
        ];
        for f in fams {
            let g = f.dilate(3.0);
            for &x in &[0.1, 1.0, 4.0] {
                assert_relative_eq!(g.value(x), 3.0 * f.value(x / 3.0), max_relative = 1e-12);
            }
        }
    }
}

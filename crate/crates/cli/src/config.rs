//! Run configuration: TOML on disk, echoed back as JSON in `summary.json`.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use isocone::geometry::{BodyOfRevolution, FamilyParams, GeneratingFunction};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub body: BodyConfig,
    #[serde(default)]
    pub volumes: VolumeLadder,
    #[serde(default)]
    pub foliation: StationLadder,
    #[serde(default)]
    pub eigen: EigenConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyConfig {
    pub family: String,
    pub n: usize,
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub s: Option<f64>,
    pub k: Option<f64>,
}

impl BodyConfig {
    pub fn build(&self) -> Result<BodyOfRevolution, CliError> {
        let params = FamilyParams { a: self.a, c: self.c, s: self.s, k: self.k };
        let profile = GeneratingFunction::preset(&self.family, &params)?;
        Ok(BodyOfRevolution::new(self.n, profile)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Geometric,
    Linear,
}

fn ladder(min: f64, max: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    match (points, spacing) {
        (0, _) => Vec::new(),
        (1, _) => vec![min],
        (_, Spacing::Geometric) => {
            let mut xs = isocone::solver::log_volumes(min, max, points);
            xs[0] = min;
            xs[points - 1] = max;
            xs
        }
        (_, Spacing::Linear) => (0..points).map(|i| min + (max - min) * i as f64 / (points - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeLadder {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "geometric")]
    pub spacing: Spacing,
}

fn geometric() -> Spacing {
    Spacing::Geometric
}

impl Default for VolumeLadder {
    fn default() -> Self {
        Self { min: 1.0, max: 1e4, points: 13, spacing: Spacing::Geometric }
    }
}

impl VolumeLadder {
    pub fn values(&self) -> Vec<f64> {
        ladder(self.min, self.max, self.points, self.spacing)
    }
}

/// Foliation stations as multiples of the threshold `x_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationLadder {
    /// Decades above `x_m` covered by the ladder.
    pub decades: f64,
    pub points: usize,
}

impl Default for StationLadder {
    fn default() -> Self {
        Self { decades: 3.0, points: 31 }
    }
}

impl StationLadder {
    pub fn values(&self, x_m: f64) -> Vec<f64> {
        ladder(x_m, x_m * 10f64.powf(self.decades), self.points, Spacing::Geometric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenConfig {
    /// Sphere dimension; defaults to the body dimension.
    pub n: Option<usize>,
    pub sphere_radius: f64,
    pub r_min: f64,
    /// Defaults to `πR/2 − 0.01`.
    pub r_max: Option<f64>,
    pub points: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self { n: None, sphere_radius: 1.0, r_min: 0.1, r_max: None, points: 16 }
    }
}

impl EigenConfig {
    pub fn r_max(&self) -> f64 {
        self.r_max.unwrap_or(FRAC_PI_2 * self.sphere_radius - 0.01)
    }

    pub fn radii(&self) -> Vec<f64> {
        ladder(self.r_min, self.r_max(), self.points, Spacing::Linear)
    }
}

/// Check tolerances; every field can be overridden with
/// `--tol-override key=value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative slack of the cone/half-space sandwich.
    pub sandwich: f64,
    /// Largest allowed scaled second difference of `P^{(n+1)/n}`.
    pub concavity: f64,
    /// Relative slack of the monotone-perimeter check.
    pub monotone: f64,
    /// Slack on the downward trend of `P/I_cone`.
    pub trend: f64,
    /// Allowed excess of the final `P/I_cone` over one.
    pub final_ratio: f64,
    /// Allowed spread `max/median` of `H·v^{1/(n+1)}`.
    pub curvature_spread: f64,
    /// Relative distance of the final `H·v^{1/(n+1)}` from the cone value.
    pub curvature_final: f64,
    /// Relative shot-versus-cap perimeter gap at the largest volume.
    pub cap_gap: f64,
    /// Relative mismatch of hit circle and cap.
    pub cap_geometry: f64,
    /// Distance of `g′` from `√(1 + a²)` at the top station.
    pub gprime_limit: f64,
    /// Final over initial cap curvature across the station ladder.
    pub curvature_decay: f64,
    /// Largest allowed cap orthogonality residual.
    pub orthogonality: f64,
    /// Distance of the hemisphere eigenvalue from `n/R²`.
    pub hemisphere: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sandwich: 1e-6,
            concavity: 1e-6,
            monotone: 1e-9,
            trend: 1e-6,
            final_ratio: 0.05,
            curvature_spread: 10.0,
            curvature_final: 0.05,
            cap_gap: 1e-4,
            cap_geometry: 1e-3,
            gprime_limit: 1e-4,
            curvature_decay: 0.01,
            orthogonality: 1e-12,
            hemisphere: 1e-3,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), CliError> {
        let slot = match key {
            "sandwich" => &mut self.sandwich,
            "concavity" => &mut self.concavity,
            "monotone" => &mut self.monotone,
            "trend" => &mut self.trend,
            "final_ratio" => &mut self.final_ratio,
            "curvature_spread" => &mut self.curvature_spread,
            "curvature_final" => &mut self.curvature_final,
            "cap_gap" => &mut self.cap_gap,
            "cap_geometry" => &mut self.cap_geometry,
            "gprime_limit" => &mut self.gprime_limit,
            "curvature_decay" => &mut self.curvature_decay,
            "orthogonality" => &mut self.orthogonality,
            "hemisphere" => &mut self.hemisphere,
            other => return Err(CliError::Config(format!("unknown tolerance '{other}'"))),
        };
        if !(value >= 0.0 && value.is_finite()) {
            return Err(CliError::Config(format!("tolerance {key} = {value} must be finite and non-negative")));
        }
        *slot = value;
        Ok(())
    }

    /// Applies `key=value` overrides in order.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), CliError> {
        for item in overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("override '{item}' is not of the form key=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("override '{item}' has a non-numeric value")))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Also write `caps.csv` with the shot-versus-cap comparison.
    pub caps: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), caps: true }
    }
}

impl RunConfig {
    /// Reads a TOML config, or JSON: either a bare config or a `summary.json`
    /// whose `config` field echoes one.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let config: RunConfig = if is_json {
            let mut value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if let Some(inner) = value.get_mut("config") {
                value = inner.take();
            }
            serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.body.build()?;
        let v = &self.volumes;
        if !(v.min > 0.0 && v.max > v.min && v.max.is_finite()) {
            return Err(CliError::Config(format!("volume ladder needs 0 < min < max (got {} and {})", v.min, v.max)));
        }
        if v.points < 3 {
            return Err(CliError::Config(format!("volume ladder needs at least 3 points (got {})", v.points)));
        }
        let f = &self.foliation;
        if !(f.decades > 0.0 && f.decades.is_finite()) || f.points < 2 {
            return Err(CliError::Config("foliation ladder needs positive decades and at least 2 points".into()));
        }
        let e = &self.eigen;
        if e.n == Some(0) {
            return Err(CliError::Config("eigen.n must be at least 1".into()));
        }
        if !(e.sphere_radius > 0.0 && e.r_min > 0.0 && e.r_max() >= e.r_min && e.r_max() <= FRAC_PI_2 * e.sphere_radius)
            || e.points == 0
        {
            return Err(CliError::Config(format!(
                "eigen ladder needs 0 < r_min ≤ r_max ≤ πR/2 and at least one point (got {}..{} for R = {})",
                e.r_min,
                e.r_max(),
                e.sphere_radius
            )));
        }
        Ok(())
    }

    pub fn eigen_n(&self) -> usize {
        self.eigen.n.unwrap_or(self.body.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[body]
family = "hyperbolic"
n = 2
a = 1.0
s = 1.0

[volumes]
min = 1.0
max = 100.0
points = 5
"#;

    #[test]
    fn parses_toml_with_defaults() {
        let cfg: RunConfig = toml::from_str(SAMPLE).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.volumes.values().len(), 5);
        assert_eq!(cfg.tolerances, Tolerances::default());
        assert_eq!(cfg.eigen_n(), 2);
    }

    #[test]
    fn json_echo_round_trips() {
        let cfg: RunConfig = toml::from_str(SAMPLE).unwrap();
        let echoed = serde_json::json!({ "passed": true, "config": cfg });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.json");
        std::fs::write(&path, serde_json::to_string_pretty(&echoed).unwrap()).unwrap();
        assert_eq!(RunConfig::load(&path).unwrap(), cfg);
    }

    #[test]
    fn overrides_apply_and_reject_unknown_keys() {
        let mut tol = Tolerances::default();
        tol.apply_overrides(&["cap_gap=1e-3".into()]).unwrap();
        assert_eq!(tol.cap_gap, 1e-3);
        assert!(tol.apply_overrides(&["nope=1".into()]).is_err());
        assert!(tol.apply_overrides(&["cap_gap".into()]).is_err());
    }

    #[test]
    fn short_ladders_are_rejected() {
        let mut cfg: RunConfig = toml::from_str(SAMPLE).unwrap();
        cfg.volumes.points = 2;
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }
}

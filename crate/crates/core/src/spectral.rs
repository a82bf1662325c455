//! Neumann eigenvalues of geodesic balls in `Sⁿ(R)` and the kernel of the
//! free-boundary Jacobi operator on a spherical cap.
//!
//! Separating variables in geodesic polar coordinates, a mode with angular
//! degree `l` reduces to
//!
//! ```text
//! φ″ + (n − 1)·cot θ·φ′ + (μ̃ − l(l + n − 2)/sin²θ)·φ = 0,   θ ∈ (0, Θ)
//! ```
//!
//! on the unit sphere with `Θ = r/R`, regular at the pole (`φ ~ θˡ`), and
//! Neumann at `Θ`. Eigenvalues on `Sⁿ(R)` are `μ = μ̃/R²`. Degree-`l`
//! harmonics on `Sⁿ⁻¹` have multiplicity 1 for `l = 0` and `n` for `l = 1`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::ode::{Dopri5, OdeError, OdeSystem};
use crate::numerics::roots::bisect;

/// Below this normalized boundary determinant a sector is counted as kernel.
pub const KERNEL_TOL: f64 = 1e-7;
/// Caps whose angular radius is this close to `π/2` are flagged marginal.
pub const MARGINAL_BAND: f64 = 1e-3;
/// Ratio between consecutive rungs of the eigenvalue search ladder.
pub const LADDER_RATIO: f64 = 1.02;
/// Relative width at which eigenvalue bisection stops.
pub const EIGEN_REL_TOL: f64 = 1e-10;

const LADDER_START: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid cap: {0}")]
    InvalidQuery(String),
    #[error("invalid stability problem: {0}")]
    InvalidProblem(String),
    #[error("no eigenvalue of sector l = {sector} in [{lo:e}, {hi:e}]")]
    NotBracketed { sector: usize, lo: f64, hi: f64 },
    #[error(transparent)]
    Ode(#[from] OdeError),
}

/// A geodesic ball of radius `cap_radius` in the round sphere `Sⁿ(R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapSpectrumQuery {
    pub n: usize,
    pub sphere_radius: f64,
    pub cap_radius: f64,
}

impl CapSpectrumQuery {
    /// Accepts `0 < r ≤ πR/2`; the hemisphere itself is allowed so that the
    /// limit can be probed.
    pub fn new(n: usize, sphere_radius: f64, cap_radius: f64) -> Result<Self, SpectralError> {
        if n == 0 {
            return Err(SpectralError::InvalidQuery("dimension must be at least 1".into()));
        }
        if !(sphere_radius > 0.0 && sphere_radius.is_finite()) {
            return Err(SpectralError::InvalidQuery(format!("sphere radius {sphere_radius} must be positive")));
        }
        if !(cap_radius > 0.0 && cap_radius / sphere_radius <= FRAC_PI_2) {
            return Err(SpectralError::InvalidQuery(format!(
                "cap radius {cap_radius} must lie in (0, πR/2] for R = {sphere_radius}"
            )));
        }
        Ok(Self { n, sphere_radius, cap_radius })
    }

    /// `Θ = r/R`.
    pub fn angular_radius(&self) -> f64 {
        self.cap_radius / self.sphere_radius
    }

    /// `r < πR/2`, the range where `μ(r) > n/R²` is claimed.
    pub fn is_below_hemisphere(&self) -> bool {
        self.angular_radius() < FRAC_PI_2
    }

    /// `n/R²`.
    pub fn threshold(&self) -> f64 {
        self.n as f64 / (self.sphere_radius * self.sphere_radius)
    }

    /// Angular radius within [`MARGINAL_BAND`] of `π/2`.
    pub fn is_marginal(&self) -> bool {
        FRAC_PI_2 - self.angular_radius() < MARGINAL_BAND
    }
}

/// Coefficients of the Jacobi problem `Δu + q·u = 0`, `∂u/∂ν = β·u` on a
/// cap meeting a cone orthogonally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapStabilityProblem {
    /// `Ric(N, N) + |σ|²`, equal to `n/R²` for a round cap in flat space.
    pub potential_constant: f64,
    /// `II(N, N)` of the cone boundary, zero along its rulings.
    pub boundary_coefficient: f64,
}

impl CapStabilityProblem {
    pub fn for_cap(q: &CapSpectrumQuery) -> Self {
        Self { potential_constant: q.threshold(), boundary_coefficient: 0.0 }
    }

    pub fn validate(&self, q: &CapSpectrumQuery) -> Result<(), SpectralError> {
        if self.potential_constant != q.threshold() {
            return Err(SpectralError::InvalidProblem(format!(
                "potential {} differs from n/R² = {}",
                self.potential_constant,
                q.threshold()
            )));
        }
        if self.boundary_coefficient != 0.0 {
            return Err(SpectralError::InvalidProblem(format!(
                "boundary coefficient {} must vanish",
                self.boundary_coefficient
            )));
        }
        Ok(())
    }
}

/// Number of independent degree-`l` harmonics on `Sⁿ⁻¹`, for `l ≤ 1`.
pub fn sector_multiplicity(n: usize, l: usize) -> usize {
    match l {
        0 => 1,
        1 => n,
        _ => panic!("only sectors 0 and 1 are tracked"),
    }
}

struct SectorOde {
    n: usize,
    k: f64,
    mu: f64,
}

impl OdeSystem<2> for SectorOde {
    fn rhs(&self, theta: f64, y: &[f64; 2], dy: &mut [f64; 2]) {
        let (sin, cos) = theta.sin_cos();
        dy[0] = y[1];
        dy[1] = -(self.n as f64 - 1.0) * cos / sin * y[1] - (self.mu - self.k / (sin * sin)) * y[0];
    }
}

/// `(φ(Θ), φ′(Θ))` for the regular solution of sector `l` at the unit-sphere
/// eigenvalue parameter `mu_tilde`, normalized by `φ ~ θˡ` at the pole.
pub fn sector_boundary_values(n: usize, theta_max: f64, l: usize, mu_tilde: f64) -> Result<(f64, f64), SpectralError> {
    let k = (l * (l + n) - 2 * l) as f64;
    let lf = l as f64;
    // Second-order Frobenius launch φ = θˡ(1 + cθ²).
    let c = ((n as f64 - 1.0) * lf / 3.0 + k / 3.0 - mu_tilde) / (4.0 * lf + 2.0 * n as f64);
    let t0 = 1e-4 * theta_max.min(1.0) / (1.0 + mu_tilde.sqrt() * theta_max);
    let phi = t0.powi(l as i32) * (1.0 + c * t0 * t0);
    let dphi = lf * t0.powi(l as i32 - 1) + c * (lf + 2.0) * t0.powi(l as i32 + 1);
    let ode = SectorOde { n, k, mu: mu_tilde };
    let integrator = Dopri5 { rtol: 1e-12, atol: 1e-14, record: false, ..Dopri5::default() };
    let sol = integrator.solve(&ode, t0, [phi, dphi], theta_max)?;
    let (_, y) = sol.last();
    Ok((y[0], y[1]))
}

/// Lowest positive unit-sphere eigenvalue `μ̃` of sector `l` on the cap of
/// angular radius `theta_max`, found on the geometric ladder from
/// `1e−6` up to `upper`.
pub fn sector_eigenvalue(n: usize, theta_max: f64, l: usize, upper: f64) -> Result<f64, SpectralError> {
    let boundary = |mu: f64| sector_boundary_values(n, theta_max, l, mu).map(|(_, d)| d);
    let mut lo = LADDER_START;
    let sign = boundary(lo)?.signum();
    loop {
        let hi = (lo * LADDER_RATIO).min(upper);
        if hi <= lo {
            return Err(SpectralError::NotBracketed { sector: l, lo: LADDER_START, hi: upper });
        }
        let d = boundary(hi)?;
        if d == 0.0 {
            return Ok(hi);
        }
        if d.signum() != sign {
            let mut err = None;
            let root = bisect(
                |mu| match boundary(mu) {
                    Ok(d) => d,
                    Err(e) => {
                        err.get_or_insert(e);
                        f64::NAN
                    }
                },
                lo,
                hi,
                EIGEN_REL_TOL * lo,
                200,
            );
            if let Some(e) = err {
                return Err(e);
            }
            return root.map_err(|_| SpectralError::NotBracketed { sector: l, lo, hi });
        }
        lo = hi;
    }
}

/// Upper end of the search window in unit-sphere units. Eigenvalues of a
/// small cap grow like `Θ⁻²`, so the window does too.
fn search_ceiling(q: &CapSpectrumQuery) -> f64 {
    let theta = q.angular_radius();
    50.0 * q.n as f64 * (1.0 / (theta * theta)).max(1.0)
}

/// First nonzero eigenvalues of the radial and first-order sectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeumannSectors {
    pub radial: f64,
    pub first_order: f64,
}

impl NeumannSectors {
    pub fn mu1(&self) -> f64 {
        self.radial.min(self.first_order)
    }
}

pub fn neumann_sectors(q: &CapSpectrumQuery) -> Result<NeumannSectors, SpectralError> {
    let theta = q.angular_radius();
    let upper = search_ceiling(q);
    let scale = q.sphere_radius * q.sphere_radius;
    Ok(NeumannSectors {
        radial: sector_eigenvalue(q.n, theta, 0, upper)? / scale,
        first_order: sector_eigenvalue(q.n, theta, 1, upper)? / scale,
    })
}

/// First nonzero Neumann eigenvalue `μ(r)` of the Laplacian on the cap.
pub fn neumann_mu1(q: &CapSpectrumQuery) -> Result<f64, SpectralError> {
    Ok(neumann_sectors(q)?.mu1())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorDeterminant {
    pub sector: usize,
    pub multiplicity: usize,
    /// `Θ(φ′ − βRφ)/√(φ² + Θ²φ′²)` at the boundary.
    pub determinant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub dim: usize,
    pub sectors: Vec<SectorDeterminant>,
    pub marginal: bool,
}

/// Kernel of `Δu + q·u = 0`, `∂u/∂ν = β·u` on the cap, sector by sector.
///
/// Sectors `l ≥ 2` cannot contribute: their Rayleigh quotient is at least
/// `l(l + n − 2)/R² ≥ 2n/R²`, above the potential `n/R²`.
pub fn jacobi_kernel(q: &CapSpectrumQuery, p: &CapStabilityProblem) -> Result<KernelReport, SpectralError> {
    p.validate(q)?;
    let theta = q.angular_radius();
    let mu_tilde = p.potential_constant * q.sphere_radius * q.sphere_radius;
    let beta_r = p.boundary_coefficient * q.sphere_radius;
    let mut sectors = Vec::with_capacity(2);
    let mut dim = 0;
    for l in 0..=1 {
        let (phi, dphi) = sector_boundary_values(q.n, theta, l, mu_tilde)?;
        let determinant = theta * (dphi - beta_r * phi) / (phi * phi + theta * theta * dphi * dphi).sqrt();
        let multiplicity = sector_multiplicity(q.n, l);
        if determinant.abs() < KERNEL_TOL {
            dim += multiplicity;
        }
        sectors.push(SectorDeterminant { sector: l, multiplicity, determinant });
    }
    let marginal = q.is_marginal();
    if marginal {
        log::info!("cap with Θ = {theta} is within {MARGINAL_BAND:e} of the hemisphere; kernel count is marginal");
    }
    Ok(KernelReport { dim, sectors, marginal })
}

/// Dimension of the Jacobi kernel.
pub fn jacobi_kernel_dim(q: &CapSpectrumQuery, p: &CapStabilityProblem) -> Result<usize, SpectralError> {
    Ok(jacobi_kernel(q, p)?.dim)
}

/// Eigenvalue `index` (from zero) of sector `l`, from piecewise-linear
/// finite elements on `nodes` uniform points with a lumped mass matrix.
/// Independent of the shooting route; used to cross-check it.
pub fn rayleigh_sector_eigenvalue(q: &CapSpectrumQuery, l: usize, index: usize, nodes: usize) -> f64 {
    assert!(nodes >= 3, "need at least three nodes");
    let n = q.n;
    let theta = q.angular_radius();
    let k = (l * (l + n) - 2 * l) as f64;
    let h = theta / (nodes - 1) as f64;
    let weight = |t: f64| t.sin().powi(n as i32 - 1);
    let mut diag = vec![0.0; nodes];
    let mut off = vec![0.0; nodes - 1];
    let mut mass = vec![0.0; nodes];
    for e in 0..nodes - 1 {
        let mid = (e as f64 + 0.5) * h;
        let w = weight(mid);
        let pot = k * w / (mid.sin() * mid.sin());
        diag[e] += w / h + pot * h / 3.0;
        diag[e + 1] += w / h + pot * h / 3.0;
        off[e] += -w / h + pot * h / 6.0;
        mass[e] += 0.5 * w * h;
        mass[e + 1] += 0.5 * w * h;
    }
    // Modes with l ≥ 1 vanish at the pole.
    let first = if l == 0 { 0 } else { 1 };
    let a: Vec<f64> = (first..nodes).map(|i| diag[i] / mass[i]).collect();
    let b: Vec<f64> = (first..nodes - 1).map(|i| off[i] / (mass[i] * mass[i + 1]).sqrt()).collect();
    let scale = q.sphere_radius * q.sphere_radius;
    tridiagonal_eigenvalue(&a, &b, index) / scale
}

/// Eigenvalue `index` of a symmetric tridiagonal matrix by Sturm-count
/// bisection.
fn tridiagonal_eigenvalue(a: &[f64], b: &[f64], index: usize) -> f64 {
    let count_below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..a.len() {
            let bb = if i == 0 { 0.0 } else { b[i - 1] * b[i - 1] };
            d = a[i] - x - bb / d;
            if d == 0.0 {
                d = f64::EPSILON * (a[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let radius = |i: usize| {
        let left = if i == 0 { 0.0 } else { b[i - 1].abs() };
        let right = if i + 1 < a.len() { b[i].abs() } else { 0.0 };
        left + right
    };
    let mut lo = (0..a.len()).map(|i| a[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..a.len()).map(|i| a[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cap(n: usize, big_r: f64, r: f64) -> CapSpectrumQuery {
        CapSpectrumQuery::new(n, big_r, r).unwrap()
    }

    #[test]
    fn rejects_caps_beyond_the_hemisphere() {
        assert!(CapSpectrumQuery::new(2, 1.0, 1.6).is_err());
        assert!(CapSpectrumQuery::new(2, 1.0, 0.0).is_err());
        assert!(CapSpectrumQuery::new(0, 1.0, 0.5).is_err());
        assert!(!cap(2, 1.0, PI / 2.0).is_below_hemisphere());
    }

    #[test]
    fn hemisphere_eigenvalue_is_n() {
        let mu = neumann_mu1(&cap(2, 1.0, PI / 2.0)).unwrap();
        assert!((mu - 2.0).abs() < 1e-3, "{mu}");
        let mu3 = neumann_mu1(&cap(3, 1.0, PI / 2.0)).unwrap();
        assert!((mu3 - 3.0).abs() < 1e-3, "{mu3}");
    }

    #[test]
    fn small_cap_approaches_disc() {
        // First zero of J₁′.
        let j11 = 1.841_183_781_340_659_3_f64;
        let mu = neumann_mu1(&cap(2, 1.0, 0.1)).unwrap();
        assert!((mu / (j11 / 0.1).powi(2) - 1.0).abs() < 1e-2, "{mu}");
    }

    #[test]
    fn first_order_mode_of_hemisphere_is_sine() {
        let (phi, dphi) = sector_boundary_values(4, 1.2, 1, 4.0).unwrap();
        assert!((phi - 1.2f64.sin()).abs() < 1e-10);
        assert!((dphi - 1.2f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn radial_mode_matches_cosine() {
        // cos θ solves the radial equation with μ̃ = n.
        let (phi, dphi) = sector_boundary_values(3, 1.0, 0, 3.0).unwrap();
        assert!((phi - 1f64.cos()).abs() < 1e-10 && (dphi + 1f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn margin_is_positive_below_the_hemisphere() {
        for n in [2, 3] {
            for r in [0.2, 0.6, 1.0, 1.4, PI / 2.0 - 0.01] {
                let q = cap(n, 1.0, r);
                assert!(neumann_mu1(&q).unwrap() > q.threshold());
            }
        }
        let q = cap(3, 2.0, 1.0);
        assert!(neumann_mu1(&q).unwrap() > 0.75);
    }

    #[test]
    fn scaling_by_sphere_radius() {
        let a = neumann_mu1(&cap(3, 2.5, 1.1)).unwrap();
        let b = neumann_mu1(&cap(3, 1.0, 1.1 / 2.5)).unwrap();
        assert!((a * 6.25 / b - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rayleigh_quotient_agrees_with_shooting() {
        for (n, r) in [(2, 0.5), (3, 1.0), (2, 1.5)] {
            let q = cap(n, 1.0, r);
            let sectors = neumann_sectors(&q).unwrap();
            let fem1 = rayleigh_sector_eigenvalue(&q, 1, 0, 2000);
            let fem0 = rayleigh_sector_eigenvalue(&q, 0, 1, 2000);
            assert!((fem1 / sectors.first_order - 1.0).abs() < 1e-3, "n={n} r={r}");
            assert!((fem0 / sectors.radial - 1.0).abs() < 1e-3, "n={n} r={r}");
        }
    }

    #[test]
    fn kernel_counts() {
        let k = |r: f64| {
            let q = cap(2, 1.0, r);
            jacobi_kernel_dim(&q, &CapStabilityProblem::for_cap(&q)).unwrap()
        };
        assert_eq!(k(1.0), 0);
        assert_eq!(k(0.2), 0);
        assert_eq!(k(PI / 2.0), 2);
    }

    #[test]
    fn stability_problem_is_validated() {
        let q = cap(2, 1.0, 1.0);
        let p = CapStabilityProblem { potential_constant: 2.0, boundary_coefficient: 0.1 };
        assert!(jacobi_kernel(&q, &p).is_err());
    }
}

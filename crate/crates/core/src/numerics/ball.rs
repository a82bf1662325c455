//! Closed forms for balls, spheres and spherical sectors.

use std::f64::consts::PI;

/// Volume of the unit ball in `Rⁿ`, via `ω₀ = 1`, `ω₁ = 2`,
/// `ωₙ = ωₙ₋₂·2π/n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let (mut even, mut odd) = (1.0, 2.0);
    if n == 0 {
        return even;
    }
    for k in 2..=n {
        if k % 2 == 0 {
            even *= 2.0 * PI / k as f64;
        } else {
            odd *= 2.0 * PI / k as f64;
        }
    }
    if n % 2 == 0 {
        even
    } else {
        odd
    }
}

/// `∫₀^θ sinᵏφ dφ` by the reduction formula.
pub fn sin_power_integral(k: usize, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let mut lo = theta; // k = 0
    let mut hi = 1.0 - c; // k = 1
    match k {
        0 => return lo,
        1 => return hi,
        _ => {}
    }
    // I_j = −sin^{j−1}θ cosθ / j + (j−1)/j · I_{j−2}
    let mut pow = s;
    for j in 2..=k {
        let jf = j as f64;
        if j % 2 == 0 {
            lo = -pow * c / jf + (jf - 1.0) / jf * lo;
        } else {
            hi = -pow * c / jf + (jf - 1.0) / jf * hi;
        }
        pow *= s;
    }
    if k % 2 == 0 {
        lo
    } else {
        hi
    }
}

/// Area of the geodesic cap of polar angle `theta` on the unit sphere
/// `Sⁿ ⊂ Rⁿ⁺¹`: `n·ωₙ·∫₀^θ sinⁿ⁻¹φ dφ`.
pub fn unit_cap_area(n: usize, theta: f64) -> f64 {
    n as f64 * unit_ball_volume(n) * sin_power_integral(n - 1, theta)
}

/// Volume of the unit spherical sector of half-angle `theta` in `Rⁿ⁺¹`.
pub fn unit_sector_volume(n: usize, theta: f64) -> f64 {
    unit_cap_area(n, theta) / (n + 1) as f64
}

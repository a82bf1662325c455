//! The verification workflows behind each subcommand.

use std::path::Path;

use isocone::foliation::{foliation_chart, foliation_threshold, g_prime, ReferenceProfile};
use isocone::geometry::asymptotic_cone;
use isocone::solver::{
    compare_caps, sample_profile, verify_asymptotics, verify_mean_curvature_bound, AsymptoticTolerances, SolverError,
};
use isocone::spectral::{jacobi_kernel, neumann_mu1, CapSpectrumQuery, CapStabilityProblem};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{num, Check, Section, Table};

pub const PROFILE_HEADER: &[&str] = &["v", "P_upper", "I_cone", "I_halfspace", "ratio", "Y", "H", "mechanism", "cap_station"];
pub const FOLIATION_HEADER: &[&str] = &["x", "c", "r", "H", "gprime", "volume", "perimeter"];
pub const EIGEN_HEADER: &[&str] = &["r", "mu", "n_over_R2", "margin", "kernel_dim"];
pub const CAPS_HEADER: &[&str] =
    &["v", "station", "center_cap", "radius_cap", "center_shot", "radius_shot", "P_cap", "P_shot", "rel_gap"];

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

pub fn profile(cfg: &RunConfig, out: &Path) -> Result<Section, CliError> {
    let tol = &cfg.tolerances;
    let body = cfg.body.build()?;
    let cone = asymptotic_cone(&body)?;
    let n = body.n;
    let mut section = Section::default();
    section.record("cone_slope", num(cone.a));
    section.record("cone_vertex_height", num(cone.vertex_height));
    if let Ok(x_m) = foliation_threshold(&body) {
        section.record("foliation_threshold", num(x_m));
    }

    let curve = sample_profile(&body, &cfg.volumes.values()).map_err(compute)?;
    let cone_profile = ReferenceProfile::cone(cone.a, n);
    let half_space = ReferenceProfile::half_space(n);
    let exponent = (n + 1) as f64 / n as f64;

    let mut table = Table::new(PROFILE_HEADER);
    let mut worst_sandwich: Option<(f64, f64, f64, f64)> = None;
    for e in &curve.samples {
        let (v, p) = (e.volume, e.perimeter_upper_bound);
        let (ic, ih) = (cone_profile.perimeter(v), half_space.perimeter(v));
        if (p < ic * (1.0 - tol.sandwich) || p > ih * (1.0 + tol.sandwich)) && worst_sandwich.is_none() {
            worst_sandwich = Some((v, ic, p, ih));
        }
        table.push(vec![
            num(v),
            num(p),
            num(ic),
            num(ih),
            num(p / ic),
            num(p.powf(exponent)),
            num(e.mean_curvature),
            e.mechanism.as_str().to_string(),
            e.cap.map(|c| num(c.station)).unwrap_or_default(),
        ]);
    }
    table.write(&out.join("profile.csv"))?;

    section.check(Check::new(
        "all_volumes_solved",
        "every requested volume has an upper-bound competitor",
        curve.failures.is_empty(),
        match curve.failures.first() {
            Some(f) => format!("{} failed, first at v = {}: {}", curve.failures.len(), num(f.volume), f.error),
            None => format!("{} volumes", curve.samples.len()),
        },
    ));
    section.check(Check::new(
        "sandwich",
        "I_cone(v) <= P(v) <= I_halfspace(v): the asymptotic cone bounds the profile below, the half-space above",
        worst_sandwich.is_none(),
        match worst_sandwich {
            Some((v, ic, p, ih)) => format!("v = {}: I_cone = {}, P = {}, I_halfspace = {}", num(v), num(ic), num(p), num(ih)),
            None => format!("relative slack {}", num(tol.sandwich)),
        },
    ));
    section.check(Check::new(
        "perimeter_monotone",
        "the profile is non-decreasing in v",
        curve.perimeters_non_decreasing(tol.monotone),
        format!("relative slack {}", num(tol.monotone)),
    ));
    let worst_concavity = curve.concavity_defects().into_iter().fold(f64::NEG_INFINITY, f64::max);
    section.check(Check::new(
        "renormalized_concave",
        "Y = P^((n+1)/n) is concave in v",
        curve.samples.len() < 3 || worst_concavity <= tol.concavity,
        format!("largest scaled second difference {}", num(worst_concavity)),
    ));

    if curve.samples.len() >= 3 {
        let asym_tol = AsymptoticTolerances { lower: tol.sandwich, trend: tol.trend, final_excess: tol.final_ratio };
        match verify_asymptotics(&curve, &cone, &asym_tol) {
            Ok(report) => {
                section.record("final_ratio", num(report.final_excess + 1.0));
                section.check(Check::new(
                    "ratio_trend",
                    "P/I_cone decreases toward one as v grows",
                    report.trend_ok() && report.monotone,
                    format!(
                        "bottom decade {}, top decade {}, monotone {}",
                        num(report.bottom_ratio),
                        num(report.top_ratio),
                        report.monotone
                    ),
                ));
                section.check(Check::new(
                    "asymptotic_ratio",
                    "P and I_cone are asymptotic: the final ratio is within tolerance of one",
                    report.final_ok(),
                    format!("final ratio {} over {:.2} decades", num(report.final_excess + 1.0), report.decades),
                ));
            }
            Err(SolverError::LowerBoundViolated { volume, ratio }) => section.check(Check::new(
                "ratio_trend",
                "the asymptotic cone profile is a lower bound",
                false,
                format!("ratio {} at v = {}", num(ratio), num(volume)),
            )),
            Err(e) => return Err(compute(e)),
        }
        let mc = verify_mean_curvature_bound(&curve, Some(&cone)).map_err(compute)?;
        section.check(Check::new(
            "curvature_bounded",
            "H(v)·v^(1/(n+1)) stays bounded along the ladder",
            mc.max <= tol.curvature_spread * mc.median,
            format!("max {} vs median {}", num(mc.max), num(mc.median)),
        ));
        let deviation = mc.final_deviation.unwrap_or(f64::NAN);
        section.check(Check::new(
            "curvature_limit",
            "H(v)·v^(1/(n+1)) approaches the cone constant",
            deviation <= tol.curvature_final,
            format!("final relative deviation {} from {}", num(deviation), num(mc.cone_constant.unwrap_or(f64::NAN))),
        ));
    }

    let caps = compare_caps(&curve.samples, tol.cap_gap);
    if caps.comparisons.is_empty() {
        section.check(Check::skipped(
            "large_volume_caps",
            "isoperimetric regions of large volume are foliation caps",
            "no volume in the foliated range".into(),
        ));
    } else {
        let geometry = caps.comparisons.iter().all(|c| c.geometry_matches(tol.cap_geometry));
        let last = caps.comparisons.last().expect("non-empty");
        section.check(Check::new(
            "large_volume_caps",
            "isoperimetric regions of large volume are foliation caps",
            caps.passed() && geometry,
            format!(
                "final gap {} at v = {}, decreasing {}, geometry within {}: {}",
                num(last.rel_gap),
                num(last.volume),
                caps.decreasing,
                num(tol.cap_geometry),
                geometry
            ),
        ));
    }
    if cfg.output.caps {
        let mut table = Table::new(CAPS_HEADER);
        for e in &curve.samples {
            if let (Some(s), Some(c)) = (e.shot, e.cap) {
                table.push(vec![
                    num(e.volume),
                    num(c.station),
                    num(c.center_height),
                    num(c.radius),
                    num(s.center_height),
                    num(s.radius),
                    num(c.cap_perimeter),
                    num(s.perimeter),
                    num((s.perimeter - c.cap_perimeter).abs() / c.cap_perimeter),
                ]);
            }
        }
        table.write(&out.join("caps.csv"))?;
    }
    Ok(section)
}

pub fn foliation(cfg: &RunConfig, out: &Path) -> Result<Section, CliError> {
    let tol = &cfg.tolerances;
    let body = cfg.body.build()?;
    let cone = asymptotic_cone(&body)?;
    let x_m = foliation_threshold(&body).map_err(compute)?;
    let chart = foliation_chart(&body, &cfg.foliation.values(x_m)).map_err(compute)?;
    let mut section = Section::default();
    section.record("foliation_threshold", num(x_m));

    let mut table = Table::new(FOLIATION_HEADER);
    let mut worst_orthogonality: f64 = 0.0;
    let mut worst_incidence: f64 = 0.0;
    let mut min_gprime = f64::INFINITY;
    for cap in &chart.samples {
        let gp = g_prime(&body, cap.station);
        min_gprime = min_gprime.min(gp);
        worst_orthogonality = worst_orthogonality.max(cap.orthogonality_residual(&body));
        worst_incidence = worst_incidence.max(cap.incidence_residual());
        table.push(vec![
            num(cap.station),
            num(cap.center_height),
            num(cap.radius),
            num(cap.mean_curvature),
            num(gp),
            num(cap.enclosed_volume),
            num(cap.cap_perimeter),
        ]);
    }
    table.write(&out.join("foliation.csv"))?;

    section.check(Check::new(
        "gprime_positive",
        "g' > 0 beyond x_m, so the caps foliate the body there",
        chart.is_foliated(&body),
        format!("min g' {}", num(min_gprime)),
    ));
    let top = chart.samples.last().expect("ladder has points");
    let limit = (1.0 + cone.a * cone.a).sqrt();
    let gp_top = g_prime(&body, top.station);
    section.check(Check::new(
        "gprime_limit",
        "g' tends to sqrt(1 + a^2)",
        (gp_top - limit).abs() <= tol.gprime_limit,
        format!("g'({}) = {} vs {}", num(top.station), num(gp_top), num(limit)),
    ));
    section.check(Check::new(
        "curvature_non_increasing",
        "the mean curvature of the caps is non-increasing in x",
        chart.curvature_non_increasing(),
        String::new(),
    ));
    let first = chart.samples.first().expect("ladder has points");
    let decay = top.mean_curvature / first.mean_curvature;
    if cfg.foliation.decades >= 3.0 {
        section.check(Check::new(
            "curvature_decay",
            "the mean curvature of the caps tends to zero",
            decay < tol.curvature_decay,
            format!("H_final / H_initial = {}", num(decay)),
        ));
    } else {
        section.check(Check::skipped(
            "curvature_decay",
            "the mean curvature of the caps tends to zero",
            format!("ladder spans {} decades, fewer than 3", cfg.foliation.decades),
        ));
    }
    section.check(Check::new(
        "caps_orthogonal",
        "every cap passes through its contact point and meets the boundary orthogonally",
        worst_orthogonality < tol.orthogonality && worst_incidence < tol.orthogonality,
        format!("orthogonality {}, incidence {}", num(worst_orthogonality), num(worst_incidence)),
    ));
    Ok(section)
}

pub fn eigen(cfg: &RunConfig, out: &Path) -> Result<Section, CliError> {
    let tol = &cfg.tolerances;
    let e = &cfg.eigen;
    let n = cfg.eigen_n();
    let big_r = e.sphere_radius;
    let stable_top = std::f64::consts::FRAC_PI_2 * big_r - 0.01;
    let mut section = Section::default();
    let mut table = Table::new(EIGEN_HEADER);
    let mut margins = Vec::new();
    let mut kernel_hits = Vec::new();
    for r in e.radii() {
        let q = CapSpectrumQuery::new(n, big_r, r).map_err(|e| CliError::Config(e.to_string()))?;
        let mu = neumann_mu1(&q).map_err(compute)?;
        let kernel = jacobi_kernel(&q, &CapStabilityProblem::for_cap(&q)).map_err(compute)?;
        let margin = mu - q.threshold();
        if r <= stable_top + 1e-12 {
            margins.push((r, margin));
            if kernel.dim != 0 {
                kernel_hits.push(r);
            }
        }
        table.push(vec![num(r), num(mu), num(q.threshold()), num(margin), kernel.dim.to_string()]);
    }
    table.write(&out.join("eigen.csv"))?;

    let worst = margins.iter().copied().fold((f64::NAN, f64::INFINITY), |acc, m| if m.1 < acc.1 { m } else { acc });
    section.check(Check::new(
        "margin_positive",
        "mu(r) > n/R^2 for every cap radius below the hemisphere",
        margins.iter().all(|m| m.1 > 0.0),
        format!("smallest margin {} at r = {}", num(worst.1), num(worst.0)),
    ));
    section.check(Check::new(
        "margin_shrinking",
        "the margin mu(r) - n/R^2 decreases as r grows",
        margins.windows(2).all(|w| w[1].1 < w[0].1),
        String::new(),
    ));
    section.check(Check::new(
        "jacobi_kernel_trivial",
        "the free-boundary Jacobi problem has only the trivial solution",
        kernel_hits.is_empty(),
        if kernel_hits.is_empty() { String::new() } else { format!("kernel at r = {}", num(kernel_hits[0])) },
    ));

    let hemisphere = CapSpectrumQuery::new(n, big_r, std::f64::consts::FRAC_PI_2 * big_r).map_err(compute)?;
    let mu_h = neumann_mu1(&hemisphere).map_err(compute)?;
    let kernel_h = jacobi_kernel(&hemisphere, &CapStabilityProblem::for_cap(&hemisphere)).map_err(compute)?;
    section.record("hemisphere_mu", num(mu_h));
    section.record("hemisphere_kernel_dim", kernel_h.dim.to_string());
    section.check(Check::new(
        "hemisphere_limit",
        "mu(r) tends to n/R^2 as r tends to the hemisphere radius",
        (mu_h - hemisphere.threshold()).abs() <= tol.hemisphere * hemisphere.threshold(),
        format!("mu = {} vs n/R^2 = {}", num(mu_h), num(hemisphere.threshold())),
    ));
    Ok(section)
}

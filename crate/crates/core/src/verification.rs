//! Independent checks on a solved model: the closed-form wall traction,
//! the excavation resultant, boundary residuals, symmetry, and the
//! logarithmic growth of the classical free-surface potentials.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::fields::{scale_sample, total_stress, FieldSample, Filter};
use crate::geometry::TunnelGeometry;
use crate::model::TunnelModel;
use crate::time_model::{MaterialParams, TimeWeights};

/// Static wall traction `(σ_R, τ_R)` at local angle `ϑ`, compression positive, kPa.
pub fn traction_oracle(theta: f64, mat: &MaterialParams, geom: &TunnelGeometry) -> (f64, f64) {
    let depth = mat.gamma * (geom.depth - geom.radius * theta.sin());
    let sigma = depth * ((1.0 + mat.k0) / 2.0 - (1.0 - mat.k0) / 2.0 * (2.0 * theta).cos());
    let tau = depth * (1.0 - mat.k0) / 2.0 * (2.0 * theta).sin();
    (sigma, tau)
}

/// Polar components `(σ_rr, τ_rϑ)` of a Cartesian stress about the tunnel centre.
pub fn to_local_polar(sx: f64, sy: f64, txy: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let srr = sx * c * c + sy * s * s + 2.0 * txy * s * c;
    let trt = (sy - sx) * s * c + txy * (c * c - s * s);
    (srr, trt)
}

/// Same traction as [`traction_oracle`], built from the initial Cartesian stress.
pub fn traction_from_initial_stress(
    theta: f64,
    mat: &MaterialParams,
    geom: &TunnelGeometry,
) -> (f64, f64) {
    let y = geom.periphery_point(theta).im;
    let (srr, trt) = to_local_polar(mat.k0 * mat.gamma * y, mat.gamma * y, 0.0, theta);
    (-srr, -trt)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultantReport {
    pub quadrature_fx: f64,
    pub quadrature_fy: f64,
    /// `γπR²`, kN/m.
    pub expected_fy: f64,
    pub fy_rel_err: f64,
    pub e_m1: Complex64,
    /// `-R²/2`, m².
    pub e_m1_expected: f64,
    pub e_m1_rel_err: f64,
    pub ab_diff: Complex64,
    /// `γ E_{-1}`.
    pub ab_expected: Complex64,
    pub ab_rel_err: f64,
}

fn rel(err: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        err
    } else {
        err / scale.abs()
    }
}

/// Force on the ground across the tunnel wall at `U = 1`, by the trapezoid
/// rule over `points` equally spaced angles of the inner circle.
pub fn wall_resultant(model: &TunnelModel, points: usize) -> Result<(f64, f64)> {
    let ev = model.evaluator();
    let p = model.params;
    let centre = Complex64::new(0.0, -model.config.geometry.depth);
    let dth = 2.0 * PI / points as f64;
    let parts: Vec<(f64, f64)> = (0..points)
        .into_par_iter()
        .map(|j| -> Result<(f64, f64)> {
            let th = j as f64 * dth;
            let s = ev.plane_sample(p.alpha, th, Filter::Off)?;
            let zeta = s.zeta();
            let normal = {
                let d = s.z - centre;
                d / d.norm()
            };
            // the wall pushes on the ground along the inward normal
            let tx = -(s.sigma_x * normal.re + s.tau_xy * normal.im);
            let ty = -(s.tau_xy * normal.re + s.sigma_y * normal.im);
            let ds = (p.backward_deriv(zeta)? * Complex64::new(0.0, 1.0) * zeta).norm() * dth;
            Ok((tx * ds, ty * ds))
        })
        .collect::<Result<_>>()?;
    let fx = parts.iter().map(|v| v.0).sum();
    let fy = parts.iter().map(|v| v.1).sum();
    Ok((fx, fy))
}

pub fn resultant_check(model: &TunnelModel, points: usize) -> Result<ResultantReport> {
    let g = &model.config.geometry;
    let gamma = model.config.material.gamma;
    let (fx, fy) = wall_resultant(model, points)?;
    let expected_fy = gamma * PI * g.radius * g.radius;
    let e_m1 = model.loads.get(-1);
    let e_m1_expected = -g.radius * g.radius / 2.0;
    let ab_diff = model.solution.a.get(-1) - model.solution.b.get(-1);
    let ab_expected = gamma * e_m1;
    Ok(ResultantReport {
        quadrature_fx: fx,
        quadrature_fy: fy,
        expected_fy,
        fy_rel_err: rel((fy - expected_fy).abs(), expected_fy),
        e_m1,
        e_m1_expected,
        e_m1_rel_err: rel((e_m1 - e_m1_expected).norm(), e_m1_expected),
        ab_diff,
        ab_expected,
        ab_rel_err: rel((ab_diff - ab_expected).norm(), ab_expected.norm()),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SingularityRow {
    /// Distance below the origin, m.
    pub distance: f64,
    /// `|u + iv|` of the logarithmic part of the classical potentials, unit time weight, m·kPa.
    pub classical: f64,
    /// `|g| / 2` of the present solution at the same point, unit time weight.
    pub present: f64,
}

/// Displacement magnitudes along the downward ray `z = -i d`.
pub fn singularity_demo(distances: &[f64], model: &TunnelModel) -> Result<Vec<SingularityRow>> {
    let g = &model.config.geometry;
    let mat = &model.config.material;
    let kappa = mat.kappa();
    let zc_bar = Complex64::new(0.0, g.depth);
    let coef = Complex64::new(0.0, g.radius * g.radius * mat.gamma / 2.0);
    for w in distances.windows(2) {
        if !(w[1] > w[0]) {
            return Err(domain("distance", w[1], "strictly increasing"));
        }
    }
    distances
        .iter()
        .map(|&d| {
            if !(d > g.depth + g.radius) {
                return Err(domain("distance", d, format!("> H + R = {}", g.depth + g.radius)));
            }
            let z = Complex64::new(0.0, -d);
            let classical = -0.5 * coef * ((z.conj() - zc_bar.conj()).ln() + kappa * (z - zc_bar).ln());
            let s = model.plane_at(z, Filter::Auto)?;
            Ok(SingularityRow {
                distance: d,
                classical: classical.norm(),
                present: s.g.norm() / 2.0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn at_most(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            value,
            threshold,
            passed: value <= threshold,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config_hash: String,
    pub iterations: usize,
    pub solve_seconds: f64,
    pub residual_history: Vec<f64>,
    pub condition_inner: f64,
    pub condition_outer: f64,
    pub resultant: ResultantReport,
    pub singularity: Vec<SingularityRow>,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

/// Surface samples at `x`, plane snapshot.
pub fn surface_profile(model: &TunnelModel, xs: &[f64], filter: Filter) -> Result<Vec<FieldSample>> {
    let ev = model.evaluator();
    xs.par_iter().map(|&x| ev.plane_at_surface(x, filter)).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Free-segment traction residual `max(|σy|, |τxy|) / (γH U(t))` over every
/// `stride`-th grid time, and the fixed-segment displacement residual
/// `|u + iv| / (γHR I(t))`.
pub fn boundary_residuals(model: &TunnelModel, stride: usize) -> Result<(f64, f64)> {
    let g = &model.config.geometry;
    let gamma = model.config.material.gamma;
    let x0 = g.x0;
    let free_x = linspace(-0.9 * x0, 0.9 * x0, 181);
    let mut fixed_x = linspace(1.1 * x0, 10.0 * x0, 200);
    fixed_x.extend(linspace(-10.0 * x0, -1.1 * x0, 200));
    let free = surface_profile(model, &free_x, Filter::On)?;
    let fixed = surface_profile(model, &fixed_x, Filter::On)?;
    let w = &model.weights;
    let mut worst_free: f64 = 0.0;
    let mut worst_fixed: f64 = 0.0;
    let scale_s = gamma * g.depth;
    let scale_u = gamma * g.depth * g.radius;
    for idx in (0..w.len()).step_by(stride.max(1)) {
        let t = w.grid[idx];
        let (u, i) = (w.u_vals[idx], w.i_vals[idx]);
        for s in &free {
            let r = scale_sample(s, u, i, t);
            let v = r.sigma_y.abs().max(r.tau_xy.abs());
            worst_free = worst_free.max(rel(v, scale_s * u));
        }
        for s in &fixed {
            let r = scale_sample(s, u, i, t);
            worst_fixed = worst_fixed.max(rel(r.displacement().norm(), scale_u * i));
        }
    }
    Ok((worst_free, worst_fixed))
}

/// Largest deviation of the wall total traction at `t` from `(1 - U(t))` times the
/// static oracle, in units of `γH`, over `points` angles.
pub fn wall_traction_residual(model: &TunnelModel, t: f64, points: usize) -> Result<f64> {
    let mat = &model.config.material;
    let g = &model.config.geometry;
    let (u, i) = model.weights.at(t)?;
    let worst = (0..points)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let th = 2.0 * PI * j as f64 / points as f64;
            let plane = model.plane_on_wall(th, Filter::Off)?;
            let s = scale_sample(&plane, u, i, t);
            let tot = total_stress(&s, mat);
            let (srr, trt) = to_local_polar(tot.sigma_x, tot.sigma_y, tot.tau_xy, th);
            let (sr, tr) = traction_oracle(th, mat, g);
            let ds = (srr + (1.0 - u) * sr).abs();
            let dt = (trt + (1.0 - u) * tr).abs();
            Ok(ds.max(dt))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(rel(worst, mat.gamma * g.depth))
}

/// Largest even/odd defect of the five surface fields, each relative to its own scale.
pub fn surface_symmetry(model: &TunnelModel, xs: &[f64]) -> Result<f64> {
    let pos = surface_profile(model, xs, Filter::On)?;
    let neg_x: Vec<f64> = xs.iter().map(|x| -x).collect();
    let neg = surface_profile(model, &neg_x, Filter::On)?;
    // (value, parity): σx, σy, v even; τxy, u odd. Displacement uses g.
    let comps: [(fn(&FieldSample) -> f64, f64); 5] = [
        (|s| s.sigma_x, 1.0),
        (|s| s.sigma_y, 1.0),
        (|s| s.tau_xy, -1.0),
        (|s| s.g.re, -1.0),
        (|s| s.g.im, 1.0),
    ];
    let mut worst: f64 = 0.0;
    for (f, parity) in comps {
        let scale = pos.iter().map(|s| f(s).abs()).fold(0.0, f64::max);
        let defect = pos
            .iter()
            .zip(&neg)
            .map(|(p, n)| (f(p) - parity * f(n)).abs())
            .fold(0.0, f64::max);
        worst = worst.max(rel(defect, scale));
    }
    Ok(worst)
}

/// `|u + iv - U/(2G_inf) g| / |U/(2G_inf) g|` with the spare modulus removed.
pub fn elastic_degeneracy(model: &TunnelModel, z: Complex64) -> Result<f64> {
    let cfg = &model.config;
    let mut mat = cfg.material;
    mat.g_e = 0.0;
    let w = TimeWeights::build(&mat, &cfg.schedule, cfg.geometry.radius)?;
    let plane = model.plane_at(z, Filter::Auto)?;
    let mut worst: f64 = 0.0;
    for idx in (0..w.len()).step_by(10) {
        let t = w.grid[idx];
        let s = scale_sample(&plane, w.u_vals[idx], w.i_vals[idx], t);
        let want = plane.g * (w.u_vals[idx] / (2.0 * mat.g_inf));
        worst = worst.max(rel((s.displacement() - want).norm(), want.norm()));
    }
    Ok(worst)
}

/// `|(σx + σy) - (σρ + σθ)|` relative, over interior probes.
pub fn trace_invariance(model: &TunnelModel) -> Result<f64> {
    let ev = model.evaluator();
    let alpha = model.params.alpha;
    let mut worst: f64 = 0.0;
    for j in 0..24 {
        let rho = alpha + (1.0 - alpha) * (j % 6) as f64 / 6.0;
        let th = 0.1 + j as f64 * 0.26;
        let s = ev.plane_sample(rho, th, Filter::Off)?;
        let a = s.sigma_rho + s.sigma_theta;
        let b = s.sigma_x + s.sigma_y;
        worst = worst.max(rel((a - b).abs(), a.abs().max(f64::MIN_POSITIVE)));
    }
    Ok(worst)
}

pub fn verify_model(model: &TunnelModel) -> Result<VerificationReport> {
    let cfg = &model.config;
    let g = &cfg.geometry;
    let gamma = cfg.material.gamma;
    let gr2 = gamma * g.radius * g.radius;
    let sol = &model.solution;
    let mut checks = Vec::new();

    let resultant = resultant_check(model, 2000)?;
    checks.push(Check::at_most(
        "load_coefficient_identity",
        resultant.e_m1_rel_err.max(resultant.e_m1.im.abs() * 1e4),
        1e-6,
        format!("E_-1 = {} (expected {})", resultant.e_m1, resultant.e_m1_expected),
    ));
    checks.push(Check::at_most(
        "single_valuedness",
        sol.single_valuedness,
        1e-8 * gr2,
        "|kappa A_-1 + B_-1|".into(),
    ));
    checks.push(Check::at_most(
        "resultant_identity",
        (sol.a.get(-1) - sol.b.get(-1) + gr2 / 2.0).norm(),
        1e-6 * gr2,
        "|A_-1 - B_-1 + gamma R^2 / 2|".into(),
    ));
    checks.push(Check::at_most(
        "iteration_count",
        sol.iterations as f64,
        100.0,
        format!("converged after {} correction passes", sol.iterations),
    ));
    checks.push(Check::at_most(
        "realness",
        sol.imag_residue,
        1e-9,
        "max|Im f| / max|Re f| before projection".into(),
    ));
    let (free, fixed) = boundary_residuals(model, 10)?;
    checks.push(Check::at_most(
        "free_segment_traction",
        free,
        0.01,
        "max(|sigma_y|, |tau_xy|) / (gamma H U(t)) on |x| <= 0.9 x0".into(),
    ));
    checks.push(Check::at_most(
        "fixed_segment_displacement",
        fixed,
        0.01,
        "|u + iv| / (gamma H R I(t)) on 1.1 x0 <= |x| <= 10 x0".into(),
    ));
    checks.push(Check::at_most(
        "wall_total_traction",
        wall_traction_residual(model, cfg.schedule.t4, 36)?,
        0.02,
        "deviation from (1 - U(t4)) x static traction, / gamma H".into(),
    ));
    checks.push(Check::at_most(
        "resultant_quadrature",
        resultant.fy_rel_err,
        0.005,
        format!("F_y = {} (expected {})", resultant.quadrature_fy, resultant.expected_fy),
    ));
    let xs = linspace(0.0, 5.0 * g.x0.max(g.depth), 101);
    checks.push(Check::at_most(
        "surface_symmetry",
        surface_symmetry(model, &xs)?,
        1e-8,
        "even sigma_x, sigma_y, v; odd tau_xy, u".into(),
    ));
    checks.push(Check::at_most(
        "trace_invariance",
        trace_invariance(model)?,
        1e-10,
        "sigma_x + sigma_y vs sigma_rho + sigma_theta".into(),
    ));
    checks.push(Check::at_most(
        "elastic_degeneracy",
        elastic_degeneracy(model, Complex64::new(3.0, -4.0))?,
        1e-12,
        "G_E = 0: u + iv vs U/(2 G_inf) g".into(),
    ));

    let h = g.depth;
    let singularity = singularity_demo(&[2.0 * h, 1e2 * h, 1e4 * h], model)?;
    // with no load both columns vanish and there is nothing to compare
    let loaded = singularity[1].classical > 0.0;
    let growth = singularity[2].classical / singularity[1].classical;
    let law = (1e4 * h).ln() / (1e2 * h).ln();
    checks.push(Check::at_most(
        "classical_log_growth",
        if loaded { rel((growth - law).abs(), law) } else { 0.0 },
        0.05,
        format!("magnitude ratio {growth} vs ln ratio {law}"),
    ));
    checks.push(Check::at_most(
        "present_far_field_decay",
        if loaded { rel(singularity[2].present, singularity[0].present) } else { 0.0 },
        0.01,
        "|g| at 1e4 H relative to 2 H".into(),
    ));

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        config_hash: cfg.hash(),
        iterations: sol.iterations,
        solve_seconds: model.solve_seconds,
        residual_history: sol.residual_history.clone(),
        condition_inner: sol.condition_inner,
        condition_outer: sol.condition_outer,
        resultant,
        singularity,
        checks,
        all_passed,
    })
}

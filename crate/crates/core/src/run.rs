//! Case and sweep orchestration, CSV and JSON emission.
//!
//! Every CSV starts with a `# config_hash=...` comment line, then a header row.
//! Floats are written with 17 significant digits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{HistoryPoint, ProblemConfig, SweepParam, SweepSpec};
use crate::error::Result;
use crate::fields::{scale_sample, total_stress, FieldSample, Filter};
use crate::model::TunnelModel;
use crate::verification::{to_local_polar, verify_model, VerificationReport};

pub const REPORT_FILE: &str = "verification.json";

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Grid time as it appears in file names, e.g. `105` or `100.5`.
pub fn time_tag(t: f64) -> String {
    let r = (t * 1e6).round() / 1e6;
    format!("{r}")
}

pub fn write_csv(path: &Path, config_hash: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# config_hash={config_hash}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WallRow {
    pub theta: f64,
    pub sample: FieldSample,
    pub sigma_x_total: f64,
    pub sigma_y_total: f64,
    pub tau_xy_total: f64,
    pub sigma_rr_total: f64,
    pub tau_rtheta_total: f64,
    /// Radial displacement, positive away from the tunnel centre.
    pub u_r: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HistoryRow {
    pub t: f64,
    pub u_coef: f64,
    pub i_weight: f64,
    pub wall: WallRow,
}

fn wall_row(model: &TunnelModel, plane: &FieldSample, theta: f64, u: f64, i: f64, t: f64) -> WallRow {
    let s = scale_sample(plane, u, i, t);
    let tot = total_stress(&s, &model.config.material);
    let (srr, trt) = to_local_polar(tot.sigma_x, tot.sigma_y, tot.tau_xy, theta);
    let u_r = (s.displacement() * Complex64::from_polar(1.0, -theta)).re;
    WallRow {
        theta,
        sample: s,
        sigma_x_total: tot.sigma_x,
        sigma_y_total: tot.sigma_y,
        tau_xy_total: tot.tau_xy,
        sigma_rr_total: srr,
        tau_rtheta_total: trt,
        u_r,
    }
}

/// Surface fields at grid time `t` for `points` abscissae in `[x_min, x_max]`.
pub fn surface_profile_at(
    model: &TunnelModel,
    t: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
    filter: Filter,
) -> Result<Vec<FieldSample>> {
    let (u, i) = model.weights.at(t)?;
    let ev = model.evaluator();
    (0..points)
        .into_par_iter()
        .map(|j| {
            let x = x_min + (x_max - x_min) * j as f64 / (points - 1) as f64;
            let plane = ev.plane_at_surface(x, filter)?;
            Ok(scale_sample(&plane, u, i, t))
        })
        .collect()
}

/// Tunnel-wall fields at grid time `t`, `points` angles from 0.
pub fn periphery_at(model: &TunnelModel, t: f64, points: usize, filter: Filter) -> Result<Vec<WallRow>> {
    let (u, i) = model.weights.at(t)?;
    (0..points)
        .into_par_iter()
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / points as f64;
            let plane = model.plane_on_wall(th, filter)?;
            Ok(wall_row(model, &plane, th, u, i, t))
        })
        .collect()
}

/// Time history at a wall point over the thinned grid.
pub fn wall_history(model: &TunnelModel, theta: f64, max_rows: usize, filter: Filter) -> Result<Vec<HistoryRow>> {
    let plane = model.plane_on_wall(theta, filter)?;
    let w = &model.weights;
    Ok(w.thinned(max_rows)
        .into_iter()
        .map(|idx| {
            let (t, u, i) = (w.grid[idx], w.u_vals[idx], w.i_vals[idx]);
            HistoryRow {
                t,
                u_coef: u,
                i_weight: i,
                wall: wall_row(model, &plane, theta, u, i, t),
            }
        })
        .collect())
}

const SURFACE_HEADER: [&str; 6] = ["x", "sigma_x", "sigma_y", "tau_xy", "u", "v"];
const PERIPHERY_HEADER: [&str; 14] = [
    "theta",
    "x",
    "y",
    "sigma_x",
    "sigma_y",
    "tau_xy",
    "sigma_x_total",
    "sigma_y_total",
    "tau_xy_total",
    "sigma_rr_total",
    "tau_rtheta_total",
    "u",
    "v",
    "u_r",
];
const HISTORY_HEADER: [&str; 11] = [
    "t", "U", "I", "sigma_x", "sigma_y", "tau_xy", "sigma_rr_total", "u", "v", "u_r", "u_r_norm",
];

fn surface_rows(samples: &[FieldSample]) -> Vec<Vec<f64>> {
    samples
        .iter()
        .map(|s| vec![s.z.re, s.sigma_x, s.sigma_y, s.tau_xy, s.u, s.v])
        .collect()
}

fn wall_rows(rows: &[WallRow]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| {
            let s = &r.sample;
            vec![
                r.theta,
                s.z.re,
                s.z.im,
                s.sigma_x,
                s.sigma_y,
                s.tau_xy,
                r.sigma_x_total,
                r.sigma_y_total,
                r.tau_xy_total,
                r.sigma_rr_total,
                r.tau_rtheta_total,
                s.u,
                s.v,
                r.u_r,
            ]
        })
        .collect()
}

fn history_rows(rows: &[HistoryRow], u0: f64) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|h| {
            let s = &h.wall.sample;
            vec![
                h.t,
                h.u_coef,
                h.i_weight,
                s.sigma_x,
                s.sigma_y,
                s.tau_xy,
                h.wall.sigma_rr_total,
                s.u,
                s.v,
                h.wall.u_r,
                h.wall.u_r / u0,
            ]
        })
        .collect()
}

pub fn write_report(path: &Path, report: &VerificationReport) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    Ok(())
}

/// Solves, verifies and writes only the JSON report.
pub fn run_solve(cfg: &ProblemConfig, out_dir: &Path) -> Result<VerificationReport> {
    std::fs::create_dir_all(out_dir)?;
    let model = TunnelModel::build(cfg)?;
    let report = verify_model(&model)?;
    write_report(&out_dir.join(REPORT_FILE), &report)?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct CaseOutput {
    pub files: Vec<PathBuf>,
    pub report: VerificationReport,
}

/// Full bundle: surface and wall profiles per requested time, wall histories, report.
pub fn run_case(cfg: &ProblemConfig, out_dir: &Path) -> Result<CaseOutput> {
    std::fs::create_dir_all(out_dir)?;
    let model = TunnelModel::build(cfg)?;
    let hash = cfg.hash();
    let o = &cfg.outputs;
    let mut files = Vec::new();
    for &t in &o.times {
        if o.surface {
            let s = surface_profile_at(&model, t, o.x_min, o.x_max, o.x_points, o.filter)?;
            let path = out_dir.join(format!("surface_{}.csv", time_tag(t)));
            write_csv(&path, &hash, &SURFACE_HEADER, &surface_rows(&s))?;
            files.push(path);
        }
        if o.periphery {
            let rows = periphery_at(&model, t, o.periphery_points, o.filter)?;
            let path = out_dir.join(format!("periphery_{}.csv", time_tag(t)));
            write_csv(&path, &hash, &PERIPHERY_HEADER, &wall_rows(&rows))?;
            files.push(path);
        }
    }
    if o.history {
        for HistoryPoint { name, theta } in &o.history_points {
            let rows = wall_history(&model, *theta, o.history_max_rows, o.filter)?;
            let path = out_dir.join(format!("history_{name}.csv"));
            write_csv(
                &path,
                &hash,
                &HISTORY_HEADER,
                &history_rows(&rows, cfg.displacement_scale()),
            )?;
            files.push(path);
        }
    }
    let report = verify_model(&model)?;
    let path = out_dir.join(REPORT_FILE);
    write_report(&path, &report)?;
    files.push(path);
    Ok(CaseOutput { files, report })
}

/// Normalized results of one sweep value.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRun {
    pub value: f64,
    pub iterations: usize,
    /// `(t, U, I, u_r / u0)` at the vault.
    pub vault: Vec<[f64; 4]>,
    /// `(t, U, I, u_r / u0)` at the bottom.
    pub bottom: Vec<[f64; 4]>,
    /// Surface at `t4`: `(x, σx/γH, σy/γH, τxy/γH, u/u0, v/u0)`.
    pub surface: Vec<[f64; 6]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub value: f64,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutput {
    pub param: SweepParam,
    pub runs: Vec<SweepRun>,
    pub failures: Vec<SweepFailure>,
    /// For `x0*`: `(value_a, value_b, max diff / scale)` per surface component.
    pub pairwise: Vec<(f64, f64, [f64; 5])>,
    pub files: Vec<PathBuf>,
}

pub fn sweep_run(cfg: &ProblemConfig, value: f64) -> Result<SweepRun> {
    let model = TunnelModel::build(cfg)?;
    let o = &cfg.outputs;
    let u0 = cfg.displacement_scale();
    let sg = cfg.stress_scale();
    let t4 = cfg.schedule.t4;
    let hist = |theta: f64| -> Result<Vec<[f64; 4]>> {
        Ok(wall_history(&model, theta, o.history_max_rows, o.filter)?
            .into_iter()
            .map(|h| [h.t, h.u_coef, h.i_weight, h.wall.u_r / u0])
            .collect())
    };
    let vault = hist(HistoryPoint::vault().theta)?;
    let bottom = hist(HistoryPoint::bottom().theta)?;
    let surface = surface_profile_at(&model, t4, o.x_min, o.x_max, o.x_points, o.filter)?
        .into_iter()
        .map(|s| {
            [
                s.z.re,
                s.sigma_x / sg,
                s.sigma_y / sg,
                s.tau_xy / sg,
                s.u / u0,
                s.v / u0,
            ]
        })
        .collect();
    Ok(SweepRun {
        value,
        iterations: model.solution.iterations,
        vault,
        bottom,
        surface,
    })
}

/// Largest difference between two normalized surface profiles per component,
/// relative to the component's largest magnitude over both profiles, floored at
/// 1 (that is, at `γH` or `u0`). The floor matters for `σy` and `τxy`, which
/// vanish on the free surface and have no scale of their own.
pub fn surface_difference(a: &[[f64; 6]], b: &[[f64; 6]]) -> [f64; 5] {
    let mut out = [0.0; 5];
    for (c, slot) in out.iter_mut().enumerate() {
        let col = c + 1;
        let scale = a
            .iter()
            .chain(b)
            .map(|r| r[col].abs())
            .fold(1.0, f64::max);
        let diff = a
            .iter()
            .zip(b)
            .map(|(p, q)| (p[col] - q[col]).abs())
            .fold(0.0, f64::max);
        *slot = diff / scale;
    }
    out
}

/// One sub-run per value; failures are recorded and the sweep continues.
pub fn run_sweep(cfg: &ProblemConfig, spec: &SweepSpec, out_dir: Option<&Path>) -> Result<SweepOutput> {
    let results: Vec<(f64, Result<SweepRun>)> = spec
        .values
        .par_iter()
        .map(|&v| (v, spec.apply(cfg, v).and_then(|c| sweep_run(&c, v))))
        .collect();
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for (value, r) in results {
        match r {
            Ok(run) => runs.push(run),
            Err(e) => failures.push(SweepFailure {
                value,
                error: e.to_string(),
            }),
        }
    }
    let pairwise = if spec.param == SweepParam::FreeWidth {
        runs.windows(2)
            .map(|w| (w[0].value, w[1].value, surface_difference(&w[0].surface, &w[1].surface)))
            .collect()
    } else {
        Vec::new()
    };
    let mut out = SweepOutput {
        param: spec.param,
        runs,
        failures,
        pairwise,
        files: Vec::new(),
    };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        out.files = write_sweep(cfg, &out, dir)?;
    }
    Ok(out)
}

fn write_sweep(cfg: &ProblemConfig, out: &SweepOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    let hash = cfg.hash();
    let tag = out.param.tag();
    let mut rows = Vec::new();
    // series: 0 vault, 1 bottom, 2 surface at t4
    for run in &out.runs {
        for (series, hist) in [(0.0, &run.vault), (1.0, &run.bottom)] {
            for h in hist.iter() {
                rows.push(vec![run.value, series, h[0], h[1], h[2], f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN, h[3]]);
            }
        }
        for s in &run.surface {
            rows.push(vec![run.value, 2.0, s[0], f64::NAN, f64::NAN, s[1], s[2], s[3], s[4], s[5], f64::NAN]);
        }
    }
    let mut files = Vec::new();
    let path = dir.join(format!("sweep_{tag}.csv"));
    write_csv(
        &path,
        &hash,
        &[
            "value",
            "series",
            "coord",
            "U",
            "I",
            "sigma_x_norm",
            "sigma_y_norm",
            "tau_xy_norm",
            "u_norm",
            "v_norm",
            "u_r_norm",
        ],
        &rows,
    )?;
    files.push(path);
    if !out.pairwise.is_empty() {
        let path = dir.join(format!("sweep_{tag}_pairwise.csv"));
        let rows: Vec<Vec<f64>> = out
            .pairwise
            .iter()
            .map(|(a, b, d)| vec![*a, *b, d[0], d[1], d[2], d[3], d[4]])
            .collect();
        write_csv(
            &path,
            &hash,
            &["value_a", "value_b", "sigma_x", "sigma_y", "tau_xy", "u", "v"],
            &rows,
        )?;
        files.push(path);
    }
    let path = dir.join(format!("sweep_{tag}_summary.json"));
    let summary = serde_json::json!({
        "param": out.param,
        "config_hash": hash,
        "values": out.runs.iter().map(|r| serde_json::json!({"value": r.value, "iterations": r.iterations})).collect::<Vec<_>>(),
        "failures": out.failures,
        "pairwise": out.pairwise,
    });
    let mut w = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut w, &summary)?;
    writeln!(w)?;
    files.push(path);
    Ok(files)
}

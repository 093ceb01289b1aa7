//! Stress and displacement fields from a converged series solution.
//!
//! Plane-strain snapshots are evaluated on the annulus, then scaled in time
//! (stresses by `U(t)`, displacements by `I(t)/2`) and rotated to Cartesian
//! components. The initial gravitational field is added last.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::geometry::{MappingParams, RADIUS_GUARD};
use crate::series::geometric_coeff;
use crate::solver::SeriesSolution;
use crate::time_model::{MaterialParams, TimeWeights};

/// Below this distance from the surface circle the `Auto` policy filters.
pub const AUTO_FILTER_BAND: f64 = 0.05;

/// `sin(kπ/N) / (kπ/N)`, 1 at `k = 0`.
pub fn lanczos(k: i64, n: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let x = k as f64 * PI / n as f64;
    x.sin() / x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    On,
    Off,
    /// Filter only near the surface circle.
    Auto,
}

impl Filter {
    fn applies(self, rho: f64) -> bool {
        match self {
            Filter::On => true,
            Filter::Off => false,
            Filter::Auto => (1.0 - rho).abs() <= AUTO_FILTER_BAND,
        }
    }
}

/// The three series outputs at one annulus point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneValues {
    /// `σθ + σρ`, kPa.
    pub sigma_sum: f64,
    /// `σρ + i τρθ`, kPa.
    pub radial: Complex64,
    /// Displacement factor, `2G (u + iv)` in the elastic case, kN/m.
    pub g: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub rho: f64,
    pub theta: f64,
    pub z: Complex64,
    pub sigma_rho: f64,
    pub sigma_theta: f64,
    pub tau_rhotheta: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub tau_xy: f64,
    /// Displacement factor of the plane snapshot.
    pub g: Complex64,
    pub u: f64,
    pub v: f64,
    pub t: Option<f64>,
}

impl FieldSample {
    pub fn zeta(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.theta)
    }

    pub fn displacement(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }
}

/// Cartesian total stress, kPa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalStress {
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub tau_xy: f64,
}

/// Evaluates fields from an immutable solution; cheap to share across threads.
#[derive(Debug, Clone)]
pub struct FieldEvaluator<'a> {
    sol: &'a SeriesSolution,
    params: MappingParams,
    weights: Vec<f64>,
}

impl<'a> FieldEvaluator<'a> {
    pub fn new(sol: &'a SeriesSolution, params: MappingParams) -> Self {
        let n = sol.n as i64;
        let weights = (-n - 1..=n + 1).map(|k| lanczos(k, sol.n)).collect();
        Self {
            sol,
            params,
            weights,
        }
    }

    pub fn params(&self) -> &MappingParams {
        &self.params
    }

    pub fn solution(&self) -> &SeriesSolution {
        self.sol
    }

    #[inline]
    fn lanczos_at(&self, k: i64, filtered: bool) -> f64 {
        if filtered {
            self.weights[(k + self.sol.n as i64 + 1) as usize]
        } else {
            1.0
        }
    }

    /// Series values at `ζ = ρ e^{iθ}`.
    pub fn plane_values(&self, rho: f64, theta: f64, filter: Filter) -> Result<PlaneValues> {
        let alpha = self.params.alpha;
        if !(rho >= alpha - RADIUS_GUARD && rho <= 1.0 + RADIUS_GUARD) || !rho.is_finite() {
            return Err(domain("rho", rho, format!("[{alpha}, 1]")));
        }
        let filtered = filter.applies(rho);
        let sol = self.sol;
        let n = sol.n as i64;
        let a = &sol.a;
        let b = &sol.b;
        let kappa = sol.kappa;
        let i = Complex64::new(0.0, 1.0);

        let zeta = Complex64::from_polar(rho, theta);
        let dz = self.params.dz_of(zeta);
        if !dz.is_finite() || dz.norm() == 0.0 {
            return Err(crate::error::TunnelError::Pole(format!("zeta = {zeta}")));
        }
        let i_over_dz = i / dz;

        // ρ^p for p in [-n-3, n+3]
        let off = n + 3;
        let pw: Vec<f64> = (-off..=off).map(|p| rho.powi(p as i32)).collect();
        let rp = |p: i64| pw[(p + off) as usize];
        // σ^k on the unit circle
        let mut sig = vec![Complex64::new(0.0, 0.0); (2 * n + 3) as usize];
        let sig_idx = |k: i64| (k + n + 1) as usize;
        sig[sig_idx(0)] = Complex64::new(1.0, 0.0);
        for k in 1..=n + 1 {
            sig[sig_idx(k)] = Complex64::from_polar(1.0, k as f64 * theta);
            sig[sig_idx(-k)] = sig[sig_idx(k)].conj();
        }

        let sq = 1.0 - rho * rho;
        let e_m1 = geometric_coeff(-1, rho);
        let e_pos = sq * sq;

        // Running tail T_k = ρ^k Σ_{j >= max(-k-1, -N)}^{N} A_j ρ^{2j}, advanced
        // one k at a time so no power beyond ρ^{-N-3} is formed.
        let mut tail = a.get(n) * rp(n - 1);
        let mut sum_a = Complex64::new(0.0, 0.0);
        let mut radial = Complex64::new(0.0, 0.0);
        let mut g_mixed = Complex64::new(0.0, 0.0);
        for k in -n..=n {
            let tail_prev = tail;
            tail = rho * tail;
            if -k - 1 >= -n {
                tail += a.get(-k - 1) * rp(-k - 2);
            }
            let w = self.lanczos_at(k, filtered) * sig[sig_idx(k)];
            let ak = a.get(k);
            sum_a += ak * rp(k) * w;

            let mut inner = e_pos * tail;
            if k <= n - 2 {
                inner += e_m1 * a.get(-k - 2) * rp(-k - 3);
            }
            let term = ak * rp(k) - b.get(k) * rp(-k - 2) + (k + 1) as f64 * inner;
            radial += term * w;

            let mut inner2 = e_pos * (rho * tail_prev);
            if k <= n - 1 {
                inner2 += e_m1 * a.get(-k - 1) * rp(-k - 1);
            }
            g_mixed += inner2 * w;
        }

        let mut g = Complex64::new(0.0, 0.0);
        for k in (-n + 1)..=(n + 1) {
            if k == 0 {
                continue;
            }
            let lk = self.lanczos_at(k, filtered);
            let ca = kappa * a.get(k - 1);
            let cb = b.get(k - 1);
            g += i * (ca * rp(k) + cb * rp(-k)) * sig[sig_idx(k)] * (lk / k as f64);
            g -= i * (ca + cb) * (lk / k as f64);
        }
        g -= i * g_mixed;
        g += i * (kappa * a.get(-1) - b.get(-1)) * rho.ln();

        Ok(PlaneValues {
            sigma_sum: 4.0 * (i_over_dz * sum_a).re,
            radial: i_over_dz * radial,
            g,
        })
    }

    /// Plane snapshot at annulus point, with Cartesian components filled in.
    pub fn plane_sample(&self, rho: f64, theta: f64, filter: Filter) -> Result<FieldSample> {
        let v = self.plane_values(rho, theta, filter)?;
        let zeta = Complex64::from_polar(rho, theta);
        let curvilinear = FieldSample {
            rho,
            theta,
            z: self.params.z_of(zeta),
            sigma_rho: v.radial.re,
            sigma_theta: v.sigma_sum - v.radial.re,
            tau_rhotheta: v.radial.im,
            sigma_x: f64::NAN,
            sigma_y: f64::NAN,
            tau_xy: f64::NAN,
            g: v.g,
            u: 0.0,
            v: 0.0,
            t: None,
        };
        to_rectangular(curvilinear, &self.params)
    }

    /// Plane snapshot at a physical point of the ground region.
    pub fn plane_at(&self, z: Complex64, filter: Filter) -> Result<FieldSample> {
        let zeta = self.params.forward(z)?;
        let mut s = self.plane_sample(zeta.norm().min(1.0), zeta.arg(), filter)?;
        s.z = z;
        Ok(s)
    }

    /// Plane snapshot on the ground surface, with `ρ = 1` exactly.
    pub fn plane_at_surface(&self, x: f64, filter: Filter) -> Result<FieldSample> {
        let zeta = self.params.forward(Complex64::new(x, 0.0))?;
        let mut s = self.plane_sample(1.0, zeta.arg(), filter)?;
        s.z = Complex64::new(x, 0.0);
        Ok(s)
    }

    /// Parallel evaluation over physical points; order of the output matches the input.
    pub fn plane_many(&self, points: &[Complex64], filter: Filter) -> Result<Vec<FieldSample>> {
        points
            .par_iter()
            .map(|&z| {
                if z.im == 0.0 {
                    self.plane_at_surface(z.re, filter)
                } else {
                    self.plane_at(z, filter)
                }
            })
            .collect()
    }
}

/// `σy − σx + 2iτxy = (S − 2 conj(σρ + iτ)) (ζ̄/ζ)(conj z′ / z′)`, with `S` the trace.
pub fn to_rectangular(mut s: FieldSample, params: &MappingParams) -> Result<FieldSample> {
    if s.rho <= 0.0 {
        return Err(domain("rho", s.rho, "(0, 1]"));
    }
    let zeta = s.zeta();
    let dz = params.dz_of(zeta);
    let trace = s.sigma_rho + s.sigma_theta;
    let radial = Complex64::new(s.sigma_rho, s.tau_rhotheta);
    let rot = (zeta.conj() / zeta) * (dz.conj() / dz);
    let r = (trace - 2.0 * radial.conj()) * rot;
    s.sigma_y = 0.5 * (trace + r.re);
    s.sigma_x = 0.5 * (trace - r.re);
    s.tau_xy = 0.5 * r.im;
    Ok(s)
}

/// Scales a plane snapshot to time `t`: stresses by `U(t)`, displacement `I(t)/2 · g`.
pub fn restore_time(plane: &FieldSample, weights: &TimeWeights, t: f64) -> Result<FieldSample> {
    let (u_t, i_t) = weights.at(t)?;
    Ok(scale_sample(plane, u_t, i_t, t))
}

pub(crate) fn scale_sample(plane: &FieldSample, u_t: f64, i_t: f64, t: f64) -> FieldSample {
    let disp = plane.g * (0.5 * i_t);
    FieldSample {
        sigma_rho: plane.sigma_rho * u_t,
        sigma_theta: plane.sigma_theta * u_t,
        tau_rhotheta: plane.tau_rhotheta * u_t,
        sigma_x: plane.sigma_x * u_t,
        sigma_y: plane.sigma_y * u_t,
        tau_xy: plane.tau_xy * u_t,
        u: disp.re,
        v: disp.im,
        t: Some(t),
        ..*plane
    }
}

/// Additional stress plus the initial field `(k0 γ y, γ y, 0)`.
pub fn total_stress(sample: &FieldSample, mat: &MaterialParams) -> TotalStress {
    let y = sample.z.im;
    TotalStress {
        sigma_x: sample.sigma_x + mat.k0 * mat.gamma * y,
        sigma_y: sample.sigma_y + mat.gamma * y,
        tau_xy: sample.tau_xy,
    }
}

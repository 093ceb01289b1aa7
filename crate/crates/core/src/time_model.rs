//! Face-release coefficient `U(t)`, Poynting-Thomson relaxation `G(t)`,
//! its creep kernel, and the convolution weight `I(t) = ∫ H(t-τ) U(τ) dτ`
//! that multiplies the plane-strain displacement.
//!
//! Internal units are kN, m, kPa and days.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Unit weight, kN/m³.
    pub gamma: f64,
    /// Lateral earth-pressure coefficient.
    pub k0: f64,
    /// Poisson ratio.
    pub nu: f64,
    /// Long-term shear modulus, kPa.
    #[serde(rename = "G_inf")]
    pub g_inf: f64,
    /// Spare shear modulus, kPa.
    #[serde(rename = "G_E")]
    pub g_e: f64,
    /// Maxwell viscosity, kPa·day.
    #[serde(rename = "eta_E")]
    pub eta_e: f64,
}

impl MaterialParams {
    /// Kolosov constant for plane strain.
    pub fn kappa(&self) -> f64 {
        3.0 - 4.0 * self.nu
    }

    /// Instantaneous shear modulus `G_inf + G_E`.
    pub fn g_initial(&self) -> f64 {
        self.g_inf + self.g_e
    }

    pub fn validate(&self) -> Vec<String> {
        let mut p = Vec::new();
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            p.push(format!("material.gamma = {} must be non-negative", self.gamma));
        }
        if !(self.k0 > 0.0 && self.k0.is_finite()) {
            p.push(format!("material.k0 = {} must be positive", self.k0));
        }
        if !(self.nu > 0.0 && self.nu < 0.5) {
            p.push(format!("material.nu = {} must lie in (0, 0.5)", self.nu));
        }
        if !(self.g_inf > 0.0 && self.g_inf.is_finite()) {
            p.push(format!("material.G_inf = {} kPa must be positive", self.g_inf));
        }
        if !(self.g_e >= 0.0 && self.g_e.is_finite()) {
            p.push(format!("material.G_E = {} kPa must be non-negative", self.g_e));
        }
        if !(self.eta_e > 0.0 && self.eta_e.is_finite()) {
            p.push(format!("material.eta_E = {} kPa·day must be positive", self.eta_e));
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcavationSchedule {
    /// Excavation rate, m/day.
    #[serde(rename = "V")]
    pub rate: f64,
    pub t0: f64,
    pub t1: f64,
    /// Face passes the section.
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    /// Convolution step, days.
    pub dtau: f64,
}

impl ExcavationSchedule {
    pub fn validate(&self) -> Vec<String> {
        let mut p = Vec::new();
        let t = [self.t0, self.t1, self.t2, self.t3, self.t4];
        if t.iter().any(|v| !v.is_finite()) {
            p.push("schedule times must be finite".to_string());
        }
        for (i, w) in t.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                p.push(format!(
                    "schedule.t{} = {} must be earlier than t{} = {}",
                    i,
                    w[0],
                    i + 1,
                    w[1]
                ));
            }
        }
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            p.push(format!("schedule.V = {} must be positive", self.rate));
        }
        if !(self.dtau > 0.0) {
            p.push(format!("schedule.dtau = {} must be positive", self.dtau));
        } else if self.t4 > self.t1 && self.dtau > (self.t4 - self.t1) / 100.0 {
            p.push(format!(
                "schedule.dtau = {} exceeds (t4 - t1)/100 = {}",
                self.dtau,
                (self.t4 - self.t1) / 100.0
            ));
        }
        p
    }

    /// Number of dtau steps spanning `[t1, t4]`.
    pub fn steps(&self) -> usize {
        ((self.t4 - self.t1) / self.dtau).round().max(1.0) as usize
    }
}

/// Fitted constants of the longitudinal displacement profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceCurve {
    pub u0: f64,
    pub a_a: f64,
    pub b_a: f64,
    pub a_b: f64,
    pub b_b: f64,
}

impl FaceCurve {
    pub fn for_poisson(nu: f64) -> Self {
        let u0 = 0.22 * nu + 0.19;
        Self {
            u0,
            a_a: -u0,
            b_a: 0.73 * nu + 0.81,
            a_b: 1.0 - u0,
            b_b: 0.39 * nu + 0.65,
        }
    }

    /// `U` as a function of the normalised distance `X = (V/R)(t - t2)`.
    pub fn at_distance(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.u0 + self.a_a * (1.0 - (self.b_a * x).exp())
        } else {
            let r = self.b_b / (self.b_b + x);
            self.u0 + self.a_b * (1.0 - r * r)
        }
    }
}

/// Face-release coefficient `U(t)` for `t` in `[t1, t4]`.
pub fn equivalent_coefficient(
    t: f64,
    mat: &MaterialParams,
    sched: &ExcavationSchedule,
    radius: f64,
) -> Result<f64> {
    if !(t >= sched.t1 && t <= sched.t4) {
        return Err(domain("t", t, format!("[{}, {}]", sched.t1, sched.t4)));
    }
    let x = sched.rate / radius * (t - sched.t2);
    Ok(FaceCurve::for_poisson(mat.nu).at_distance(x))
}

/// `G(t) = G_inf + G_E exp(-(G_E/eta_E)(t - t1))` for `t >= t1`.
pub fn shear_modulus(t: f64, mat: &MaterialParams, sched: &ExcavationSchedule) -> Result<f64> {
    if !(t >= sched.t1) {
        return Err(domain("t", t, format!("[{}, inf)", sched.t1)));
    }
    Ok(mat.g_inf + mat.g_e * (-(mat.g_e / mat.eta_e) * (t - sched.t1)).exp())
}

/// Decay rate of the continuous creep kernel, 1/day.
pub fn creep_decay_rate(mat: &MaterialParams) -> f64 {
    mat.g_e / mat.g_initial() * mat.g_inf / mat.eta_e
}

/// Continuous part of the creep kernel, 1/(kPa·day). The Dirac part
/// `δ/(G_E + G_inf)` is accounted for in [`convolution_weight`].
pub fn creep_kernel_continuous(dt: f64, mat: &MaterialParams) -> f64 {
    let ratio = mat.g_e / mat.g_initial();
    ratio * ratio / mat.eta_e * (-creep_decay_rate(mat) * dt).exp()
}

/// `I(t)` by composite trapezoid on the dtau grid starting at `t1`; the last
/// panel is shortened when `t` is not a grid node.
pub fn convolution_weight(
    t: f64,
    mat: &MaterialParams,
    sched: &ExcavationSchedule,
    radius: f64,
) -> Result<f64> {
    let u_t = equivalent_coefficient(t, mat, sched, radius)?;
    let instantaneous = u_t / mat.g_initial();
    if mat.g_e == 0.0 {
        return Ok(instantaneous);
    }
    let span = t - sched.t1;
    let full = (span / sched.dtau + 1e-9).floor() as usize;
    let mut acc = 0.0;
    let integrand = |tau: f64| -> Result<f64> {
        Ok(creep_kernel_continuous(t - tau, mat)
            * equivalent_coefficient(tau.min(sched.t4), mat, sched, radius)?)
    };
    let mut prev = integrand(sched.t1)?;
    for i in 1..=full {
        let tau = (sched.t1 + i as f64 * sched.dtau).min(t);
        let cur = integrand(tau)?;
        acc += 0.5 * sched.dtau * (prev + cur);
        prev = cur;
    }
    let covered = full as f64 * sched.dtau;
    let rest = span - covered;
    if rest > 1e-12 * sched.dtau {
        acc += 0.5 * rest * (prev + integrand(t)?);
    }
    Ok(acc + instantaneous)
}

/// `U(t)` and `I(t)` tabulated on the uniform grid `t1 + i dtau`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeWeights {
    pub grid: Vec<f64>,
    pub u_vals: Vec<f64>,
    /// 1/kPa
    pub i_vals: Vec<f64>,
    dtau: f64,
}

impl TimeWeights {
    /// Builds the table with the recursive trapezoid
    /// `J_{n+1} = e^{-c dτ} J_n + dτ/2 (e^{-c dτ} U_n + U_{n+1})`,
    /// which matches [`convolution_weight`] node by node at O(1) cost per step.
    pub fn build(mat: &MaterialParams, sched: &ExcavationSchedule, radius: f64) -> Result<Self> {
        let steps = sched.steps();
        let dtau = (sched.t4 - sched.t1) / steps as f64;
        let curve = FaceCurve::for_poisson(mat.nu);
        let grid: Vec<f64> = (0..=steps)
            .map(|i| if i == steps { sched.t4 } else { sched.t1 + i as f64 * dtau })
            .collect();
        let u_vals: Vec<f64> = grid
            .iter()
            .map(|&t| curve.at_distance(sched.rate / radius * (t - sched.t2)))
            .collect();

        let ratio = mat.g_e / mat.g_initial();
        let prefactor = ratio * ratio / mat.eta_e;
        let decay = (-creep_decay_rate(mat) * dtau).exp();
        let mut i_vals = Vec::with_capacity(grid.len());
        let mut j = 0.0;
        for (n, &u) in u_vals.iter().enumerate() {
            if n > 0 {
                j = decay * j + 0.5 * dtau * (decay * u_vals[n - 1] + u);
            }
            i_vals.push(prefactor * j + u / mat.g_initial());
        }
        Ok(Self {
            grid,
            u_vals,
            i_vals,
            dtau,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn dtau(&self) -> f64 {
        self.dtau
    }

    /// Exact grid lookup; off-grid times are refused rather than interpolated.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let t1 = self.grid[0];
        let pos = (t - t1) / self.dtau;
        let idx = pos.round();
        if idx < 0.0 || idx as usize >= self.grid.len() || (pos - idx).abs() > 1e-6 {
            return Err(domain(
                "t",
                t,
                format!(
                    "grid {}..{} step {} (off-grid times are not interpolated)",
                    t1,
                    self.grid[self.grid.len() - 1],
                    self.dtau
                ),
            ));
        }
        Ok(idx as usize)
    }

    pub fn at(&self, t: f64) -> Result<(f64, f64)> {
        let i = self.index_of(t)?;
        Ok((self.u_vals[i], self.i_vals[i]))
    }

    /// Every `stride`-th index plus the last one.
    pub fn thinned(&self, max_rows: usize) -> Vec<usize> {
        let n = self.grid.len();
        let stride = n.div_ceil(max_rows.max(1)).max(1);
        let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
        if *idx.last().unwrap() != n - 1 {
            idx.push(n - 1);
        }
        idx
    }
}

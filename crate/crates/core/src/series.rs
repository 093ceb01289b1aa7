//! Series tables shared by the solver and the field evaluator:
//!
//! * Taylor/Laurent coefficients of the Plemelj factor
//!   `X(ζ) = (ζ - e^{-iθ0})^{-1/2-iλ} (ζ - e^{iθ0})^{-1/2+iλ}`
//!   inside (`alpha_seq`) and outside (`beta_seq`) the unit circle;
//! * the geometric kernel `e_k(ρ)` of `(z(σ/ρ) - z(ρσ)) / conj z'(ρσ)`;
//! * Laurent coefficients `E_k` of the tunnel-wall load, from uniform
//!   sampling of the unit circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::MappingParams;

/// Coefficients indexed by a signed integer over `lo..=hi`; reads outside
/// the window return zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Laurent {
    lo: i64,
    data: Vec<Complex64>,
}

impl Laurent {
    pub fn zeros(lo: i64, hi: i64) -> Self {
        assert!(hi >= lo);
        Self {
            lo,
            data: vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize],
        }
    }

    pub fn from_vec(lo: i64, data: Vec<Complex64>) -> Self {
        Self { lo, data }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.data.len() as i64 - 1
    }

    #[inline]
    pub fn get(&self, k: i64) -> Complex64 {
        let i = k - self.lo;
        if i < 0 || i >= self.data.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.data[i as usize]
        }
    }

    #[inline]
    pub fn set(&mut self, k: i64, v: Complex64) {
        let i = (k - self.lo) as usize;
        self.data[i] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.lo + i as i64, v))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig {
    /// Solver truncation: `f_n` for `-N <= n <= N`.
    #[serde(rename = "N")]
    pub n: usize,
    /// Load truncation: `E_k` for `-M <= k <= M`.
    #[serde(rename = "M")]
    pub m: usize,
    /// Uniform samples on the unit circle used for the load transform.
    #[serde(rename = "L_samples")]
    pub l_samples: usize,
    /// Stop once `max |f^(q)| <= eps`.
    pub eps: f64,
    pub max_iter: usize,
}

impl TruncationConfig {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            l_samples: Self::default_samples(m),
            eps: 1e-16,
            max_iter: 500,
        }
    }

    pub fn default_samples(m: usize) -> usize {
        (2 * (2 * m + 1)).next_power_of_two().max(4096)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.n < 1 {
            p.push("truncation.N must be at least 1".to_string());
        }
        if self.m <= self.n {
            p.push(format!(
                "truncation.M = {} must exceed N = {}",
                self.m, self.n
            ));
        }
        if self.l_samples < 2 * (2 * self.m + 1) {
            p.push(format!(
                "truncation.L_samples = {} must be at least 2(2M+1) = {}",
                self.l_samples,
                2 * (2 * self.m + 1)
            ));
        }
        if !(self.eps > 0.0) {
            p.push(format!("truncation.eps = {} must be positive", self.eps));
        }
        if self.max_iter == 0 {
            p.push("truncation.max_iter must be positive".to_string());
        }
        p
    }
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self::new(200, 500)
    }
}

/// Expansion coefficients of the Plemelj factor.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCoeffs {
    pub lambda: f64,
    pub theta0: f64,
    /// `c_0 = 1/2`, then the binomial products rotated by `e^{ikθ0}`.
    pub c: Vec<Complex64>,
    /// Same products rotated by `e^{-ikθ0}`.
    pub d: Vec<Complex64>,
    /// Inner Taylor coefficients, index 0..=K.
    pub alpha_seq: Vec<Complex64>,
    /// Outer coefficients of `ζ^{-k}`, index 0..=K with `beta_seq[0] = 0`.
    pub beta_seq: Vec<Complex64>,
}

impl BasisCoeffs {
    pub fn order(&self) -> usize {
        self.alpha_seq.len() - 1
    }

    #[inline]
    pub fn alpha_k(&self, k: i64) -> Complex64 {
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.alpha_seq[k as usize]
        }
    }

    #[inline]
    pub fn beta_k(&self, k: i64) -> Complex64 {
        if k < 1 {
            Complex64::new(0.0, 0.0)
        } else {
            self.beta_seq[k as usize]
        }
    }

    /// Exponent of the first factor, `-1/2 - iλ`.
    pub fn exponent(&self) -> Complex64 {
        Complex64::new(-0.5, -self.lambda)
    }
}

pub fn basis_coeffs(kappa: f64, theta0: f64, order: usize) -> BasisCoeffs {
    let order = order.max(1);
    let lambda = kappa.ln() / (2.0 * PI);
    let step = Complex64::new(0.5, -lambda);
    let rot_c = Complex64::from_polar(1.0, theta0);
    let rot_d = Complex64::from_polar(1.0, -theta0);

    // Running binomial products start from 1; c_0 = d_0 = 1/2 is the
    // convention that lets the k = 0 case of the sums collapse to c_0 + conj c_0.
    let mut c = Vec::with_capacity(order + 1);
    let mut d = Vec::with_capacity(order + 1);
    c.push(Complex64::new(0.5, 0.0));
    d.push(Complex64::new(0.5, 0.0));
    let mut pc = Complex64::new(1.0, 0.0);
    let mut pd = Complex64::new(1.0, 0.0);
    for k in 1..=order {
        let factor = (step - k as f64) / k as f64;
        pc *= factor * rot_c;
        pd *= factor * rot_d;
        c.push(pc);
        d.push(pd);
    }

    let head = -(-2.0 * lambda * theta0).exp();
    let mut alpha_seq = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut s = c[k] + c[k].conj();
        for l in 1..k {
            s += c[l] * c[k - l].conj();
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        alpha_seq.push(s * (head * sign));
    }

    let mut beta_seq = Vec::with_capacity(order + 1);
    beta_seq.push(Complex64::new(0.0, 0.0));
    for k in 1..=order {
        let m = k - 1;
        let mut s = d[m] + d[m].conj();
        for l in 1..m {
            s += d[l] * d[m - l].conj();
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        beta_seq.push(s * sign);
    }

    BasisCoeffs {
        lambda,
        theta0,
        c,
        d,
        alpha_seq,
        beta_seq,
    }
}

/// `X(ζ)` from complex powers, with the branch cut on the unit-circle arc
/// `|arg ζ| < θ0` and `X ~ 1/ζ` at infinity.
pub fn plemelj_factor(zeta: Complex64, theta0: f64, lambda: f64) -> Complex64 {
    let w_minus = Complex64::from_polar(1.0, -theta0);
    let w_plus = Complex64::from_polar(1.0, theta0);
    let ratio = (zeta - w_minus) / (zeta - w_plus);
    let log_ratio = (ratio * w_plus).ln() - Complex64::new(0.0, theta0);
    let p = Complex64::new(-0.5, -lambda);
    (p * log_ratio).exp() / (zeta - w_plus)
}

/// Residual between a truncated expansion of `X` and its direct value.
/// Probes inside the unit disk use the Taylor series, outside the `1/ζ` series.
pub fn product_series_check(coeffs: &BasisCoeffs, probe: Complex64) -> Result<f64> {
    let r = probe.norm();
    if (r - 1.0).abs() < 1e-9 {
        return Err(domain("|probe|", r, "off the unit circle"));
    }
    let direct = plemelj_factor(probe, coeffs.theta0, coeffs.lambda);
    let series = if r < 1.0 {
        // Horner, highest order first.
        coeffs
            .alpha_seq
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * probe + a)
    } else {
        let inv = 1.0 / probe;
        coeffs
            .beta_seq
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &b| acc * inv + b)
    };
    Ok((series - direct).norm())
}

/// `e_l(ρ)`: zero for `l <= -2`, `-(1-ρ²)ρ` for `l = -1`, `(1-ρ²)²ρ^l` otherwise.
#[inline]
pub fn geometric_coeff(l: i64, rho: f64) -> f64 {
    let one_m = 1.0 - rho * rho;
    match l {
        l if l < -1 => 0.0,
        -1 => -one_m * rho,
        l => one_m * one_m * rho.powi(l as i32),
    }
}

/// Tabulated `e_l(ρ)` for `-1 <= l <= max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricCoeffs {
    pub rho: f64,
    values: Vec<f64>,
}

impl GeometricCoeffs {
    pub fn get(&self, l: i64) -> f64 {
        if l < -1 {
            0.0
        } else {
            self.values.get((l + 1) as usize).copied().unwrap_or_else(|| geometric_coeff(l, self.rho))
        }
    }

    pub fn max_order(&self) -> i64 {
        self.values.len() as i64 - 2
    }
}

pub fn geometric_coeffs(rho: f64, params: &MappingParams, max_order: usize) -> Result<GeometricCoeffs> {
    if rho < params.alpha - crate::geometry::RADIUS_GUARD || rho > 1.0 + crate::geometry::RADIUS_GUARD {
        return Err(domain("rho", rho, format!("[{}, 1]", params.alpha)));
    }
    let rho = rho.clamp(params.alpha, 1.0);
    let one_m = 1.0 - rho * rho;
    let mut values = Vec::with_capacity(max_order + 2);
    values.push(-one_m * rho);
    let mut pow = 1.0;
    for _ in 0..=max_order {
        values.push(one_m * one_m * pow);
        pow *= rho;
    }
    Ok(GeometricCoeffs { rho, values })
}

/// Laurent coefficients of the tunnel-wall load integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadCoeffs {
    /// `E_{-M}..E_M`, m².
    pub e: Laurent,
}

impl LoadCoeffs {
    pub fn get(&self, k: i64) -> Complex64 {
        self.e.get(k)
    }
}

/// `-y(ασ) [k0 dy(ασ)/dσ - i dx(ασ)/dσ]` with `x`, `y` written as functions
/// of `σ` analytic in `α < |σ| < 1/α`.
pub fn load_integrand(sigma: Complex64, k0: f64, params: &MappingParams) -> Complex64 {
    let al = params.alpha;
    let a = params.a;
    let i = Complex64::new(0.0, 1.0);
    let p = 1.0 - al * sigma;
    let q = sigma - al;
    let u = (1.0 + al * sigma) / p;
    let w = (sigma + al) / q;
    let y = -a / 2.0 * (u + w);
    let inv_p2 = 1.0 / (p * p);
    let inv_q2 = 1.0 / (q * q);
    let dx = -i * a * al * (inv_p2 + inv_q2);
    let dy = -a * al * (inv_p2 - inv_q2);
    -y * (k0 * dy - i * dx)
}

pub fn load_coeffs(k0: f64, params: &MappingParams, trunc: &TruncationConfig) -> Result<LoadCoeffs> {
    let l = trunc.l_samples;
    let m = trunc.m as i64;
    if l < 2 * (2 * trunc.m + 1) {
        return Err(domain(
            "L_samples",
            l as f64,
            format!(">= {}", 2 * (2 * trunc.m + 1)),
        ));
    }
    let roots: Vec<Complex64> = (0..l)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / l as f64))
        .collect();
    let samples: Vec<Complex64> = roots
        .iter()
        .map(|&s| load_integrand(s, k0, params))
        .collect();
    let mut e = Laurent::zeros(-m, m);
    let lz = l as i64;
    for k in -m..=m {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, f) in samples.iter().enumerate() {
            // σ_j^{-k} = roots[(-j k) mod L]
            let idx = (-(j as i64) * k).rem_euclid(lz) as usize;
            acc += f * roots[idx];
        }
        e.set(k, acc / l as f64);
    }
    Ok(LoadCoeffs { e })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{derive_mapping_params, TunnelGeometry};
    use approx::assert_relative_eq;

    fn params() -> MappingParams {
        derive_mapping_params(&TunnelGeometry::new(5.0, 10.0, 10.0)).unwrap()
    }

    #[test]
    fn basis_heads() {
        let p = params();
        let b = basis_coeffs(1.8, p.theta0, 10);
        assert_eq!(b.c[0], Complex64::new(0.5, 0.0));
        assert_eq!(b.d[0], Complex64::new(0.5, 0.0));
        assert_relative_eq!(b.lambda, 1.8f64.ln() / (2.0 * PI));
        let head = -(-2.0 * b.lambda * p.theta0).exp();
        assert_relative_eq!(b.alpha_seq[0].re, head, max_relative = 1e-15);
        assert_eq!(b.alpha_seq[0].im, 0.0);
        assert_relative_eq!(b.alpha_seq[0].re, -0.765_616_991_732_627, max_relative = 1e-12);
        assert_eq!(b.beta_seq[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn d_is_the_theta_reflection_of_c() {
        let p = params();
        let b = basis_coeffs(1.8, p.theta0, 30);
        let reflected = basis_coeffs(1.8, -p.theta0, 30);
        for k in 0..=30 {
            assert!((b.d[k] - reflected.c[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn expansions_match_direct_plemelj_factor() {
        let p = params();
        let b = basis_coeffs(1.8, p.theta0, 400);
        let at0 = product_series_check(&b, Complex64::new(0.0, 0.0)).unwrap();
        assert!(at0 < 1e-15);
        let direct0 = plemelj_factor(Complex64::new(0.0, 0.0), p.theta0, b.lambda);
        assert_relative_eq!(direct0.re, b.alpha_seq[0].re, max_relative = 1e-14);
        for probe in [
            Complex64::new(0.5 * p.alpha, 0.0),
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.6, -0.5),
        ] {
            assert!(product_series_check(&b, probe).unwrap() < 1e-10, "{probe}");
        }
        for probe in [Complex64::new(3.0, 0.0), Complex64::new(-2.0, 1.0), Complex64::new(0.0, -1.5)] {
            assert!(product_series_check(&b, probe).unwrap() < 1e-10, "{probe}");
        }
        assert!(product_series_check(&b, Complex64::from_polar(1.0, 0.3)).is_err());
    }

    #[test]
    fn geometric_kernel_values() {
        let p = params();
        let e = geometric_coeffs(p.alpha, &p, 5).unwrap();
        assert_relative_eq!(e.get(-1), -0.248_711_305_964_282_1, max_relative = 1e-12);
        assert_relative_eq!(e.get(0), 0.861_561_236_693_89, max_relative = 1e-12);
        assert_relative_eq!(e.get(1), 0.230_854_637_602_087_2, max_relative = 1e-12);
        assert_eq!(e.get(-2), 0.0);
        let surface = geometric_coeffs(1.0, &p, 5).unwrap();
        for l in -3..=5 {
            assert_eq!(surface.get(l), 0.0);
        }
        assert!(geometric_coeffs(0.1, &p, 5).is_err());
        for l in -1..20 {
            assert_relative_eq!(e.get(l), geometric_coeff(l, p.alpha), max_relative = 1e-13);
        }
    }

    #[test]
    fn geometric_kernel_is_the_expansion_of_the_closed_form() {
        // (z(σ/ρ) - z(ρσ)) / conj z'(ρσ) on |σ| = 1
        let p = params();
        let rho = 0.6;
        for t in [0.2, 1.9, 4.0] {
            let s = Complex64::from_polar(1.0, t);
            let direct = (p.z_of(s / rho) - p.z_of(s * rho)) / p.dz_of(s * rho).conj();
            let series: Complex64 = (-1..400).map(|l| geometric_coeff(l, rho) * s.powi(l as i32)).sum();
            assert!((direct - series).norm() < 1e-12 * direct.norm());
        }
    }

    #[test]
    fn resultant_coefficient() {
        let p = params();
        let loads = load_coeffs(0.8, &p, &TruncationConfig::new(200, 500)).unwrap();
        let e = loads.get(-1);
        assert!((e.re + 12.5).abs() < 1e-8);
        assert!(e.im.abs() < 1e-10);
    }

    #[test]
    fn load_transform_parseval_and_reconstruction() {
        let p = params();
        let trunc = TruncationConfig::new(200, 500);
        let loads = load_coeffs(0.8, &p, &trunc).unwrap();
        let l = trunc.l_samples;
        let energy: f64 = (0..l)
            .map(|j| {
                let s = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / l as f64);
                load_integrand(s, 0.8, &p).norm_sqr()
            })
            .sum::<f64>()
            / l as f64;
        let coeff_energy: f64 = loads.e.iter().map(|(_, v)| v.norm_sqr()).sum();
        assert_relative_eq!(energy, coeff_energy, max_relative = 1e-8);

        let held_out = Complex64::from_polar(1.0, 0.123_456);
        let f = load_integrand(held_out, 0.8, &p);
        let rec: Complex64 = loads.e.iter().map(|(k, v)| v * held_out.powi(k as i32)).sum();
        let scale = (0..l)
            .map(|j| load_integrand(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / l as f64), 0.8, &p).norm())
            .fold(0.0, f64::max);
        assert!((rec - f).norm() < 1e-8 * scale);
    }

    #[test]
    fn load_coefficients_decay() {
        let p = params();
        let loads = load_coeffs(0.8, &p, &TruncationConfig::new(200, 500)).unwrap();
        assert!(loads.get(500).norm() < loads.get(250).norm() || loads.get(250).norm() < 1e-300);
        assert!(loads.get(40).norm() < loads.get(20).norm());
        assert!(loads.get(-40).norm() < loads.get(-20).norm());
    }

    #[test]
    fn truncation_validation() {
        let mut t = TruncationConfig::new(200, 500);
        assert!(t.validate().is_empty());
        assert_eq!(t.l_samples, 4096);
        t.m = 150;
        assert!(!t.validate().is_empty());
        let mut t = TruncationConfig::new(200, 500);
        t.l_samples = 1000;
        assert!(!t.validate().is_empty());
    }
}

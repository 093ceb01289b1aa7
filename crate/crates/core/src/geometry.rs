//! Tunnel geometry and the Möbius map between the ground region and a
//! concentric annulus `alpha <= |zeta| <= 1`.
//!
//! The ground surface `Im z = 0` maps onto the unit circle, the tunnel
//! periphery `|z + iH| = R` onto the inner circle `|zeta| = alpha`. The
//! surface point at infinity lands on `zeta = 1`, the origin on `zeta = -1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TunnelError};

/// Tolerance used when checking `|zeta|` against the annulus bounds.
pub const RADIUS_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelGeometry {
    /// Tunnel radius, m.
    #[serde(rename = "R")]
    pub radius: f64,
    /// Depth of the tunnel centre, m.
    #[serde(rename = "H")]
    pub depth: f64,
    /// Half-width of the free ground-surface segment, m.
    pub x0: f64,
}

impl TunnelGeometry {
    pub fn new(radius: f64, depth: f64, x0: f64) -> Self {
        Self { radius, depth, x0 }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            problems.push(format!("geometry.R = {} must be positive", self.radius));
        }
        if !(self.depth > self.radius && self.depth.is_finite()) {
            problems.push(format!(
                "geometry.H = {} must exceed R = {} (tunnel below the surface)",
                self.depth, self.radius
            ));
        }
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            problems.push(format!("geometry.x0 = {} must be positive", self.x0));
        }
        problems
    }

    /// Physical point on the tunnel circle at local polar angle `theta`
    /// measured at the tunnel centre (pi/2 is the vault, 3pi/2 the bottom).
    pub fn periphery_point(&self, theta: f64) -> Complex64 {
        Complex64::new(0.0, -self.depth) + Complex64::from_polar(self.radius, theta)
    }

    /// Whether `z` lies in the closed ground region below the surface and
    /// outside the excavation.
    pub fn contains(&self, z: Complex64) -> bool {
        let centre = Complex64::new(0.0, -self.depth);
        z.im <= RADIUS_GUARD && (z - centre).norm() >= self.radius * (1.0 - RADIUS_GUARD)
    }
}

/// Parameters of the annulus map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MappingParams {
    /// Inner annulus radius (not the series coefficients of the Plemelj basis).
    pub alpha: f64,
    /// Scale of the map, m.
    pub a: f64,
    /// Half-angle of the arc that images the fixed far-field surface.
    pub theta0: f64,
}

pub fn derive_mapping_params(geom: &TunnelGeometry) -> Result<MappingParams> {
    let TunnelGeometry { radius, depth, x0 } = *geom;
    if !(radius > 0.0) || !(depth > radius) {
        return Err(TunnelError::DegenerateGeometry(format!(
            "need 0 < R < H, got R = {radius}, H = {depth}"
        )));
    }
    if !(x0 > 0.0) {
        return Err(TunnelError::DegenerateGeometry(format!(
            "need x0 > 0, got {x0}"
        )));
    }
    let alpha = radius / (depth + (depth * depth - radius * radius).sqrt());
    let a2 = alpha * alpha;
    let a = depth * (1.0 - a2) / (1.0 + a2);
    let theta0 = 2.0 * (a / x0).atan();
    Ok(MappingParams { alpha, a, theta0 })
}

impl MappingParams {
    /// `zeta(z) = (z + ia) / (z - ia)`.
    pub fn forward(&self, z: Complex64) -> Result<Complex64> {
        let ia = Complex64::new(0.0, self.a);
        let den = z - ia;
        if den.norm() <= f64::EPSILON * self.a {
            return Err(TunnelError::Pole(format!("z = {z}")));
        }
        Ok((z + ia) / den)
    }

    /// `z(zeta) = -ia (1 + zeta) / (1 - zeta)`.
    pub fn backward(&self, zeta: Complex64) -> Result<Complex64> {
        let den = Complex64::new(1.0, 0.0) - zeta;
        if den.norm() <= f64::EPSILON {
            return Err(TunnelError::Pole(format!(
                "zeta = {zeta} (image of the point at infinity)"
            )));
        }
        Ok(Complex64::new(0.0, -self.a) * (1.0 + zeta) / den)
    }

    /// `z'(zeta) = -2ia / (1 - zeta)^2`.
    pub fn backward_deriv(&self, zeta: Complex64) -> Result<Complex64> {
        let den = Complex64::new(1.0, 0.0) - zeta;
        if den.norm() <= f64::EPSILON {
            return Err(TunnelError::Pole(format!("zeta = {zeta}")));
        }
        Ok(Complex64::new(0.0, -2.0 * self.a) / (den * den))
    }

    /// Unchecked forms for the inner loops, where the caller already knows
    /// `zeta` is in the annulus and away from 1.
    #[inline]
    pub(crate) fn z_of(&self, zeta: Complex64) -> Complex64 {
        Complex64::new(0.0, -self.a) * (1.0 + zeta) / (1.0 - zeta)
    }

    #[inline]
    pub(crate) fn dz_of(&self, zeta: Complex64) -> Complex64 {
        let den = 1.0 - zeta;
        Complex64::new(0.0, -2.0 * self.a) / (den * den)
    }

    /// Checks `alpha <= |zeta| <= 1` with the guard band.
    pub fn in_annulus(&self, zeta: Complex64) -> bool {
        let r = zeta.norm();
        r >= self.alpha - RADIUS_GUARD && r <= 1.0 + RADIUS_GUARD
    }

    /// The joint points `W1, W2` on the surface map to `e^{-i theta0}` and `e^{i theta0}`.
    pub fn joint_points(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(1.0, -self.theta0),
            Complex64::from_polar(1.0, self.theta0),
        )
    }

    /// `theta0` through the complex logarithm instead of `atan`.
    pub fn theta0_via_log(a: f64, x0: f64) -> f64 {
        let num = Complex64::new(x0, a);
        let den = Complex64::new(x0, -a);
        ((num / den).ln() * Complex64::new(0.0, -1.0)).re
    }
}

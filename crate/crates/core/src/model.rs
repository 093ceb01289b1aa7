//! A solved problem: mapping, basis, loads, series solution and time weights
//! built once from a validated config.

use std::time::Instant;

use num_complex::Complex64;

use crate::config::ProblemConfig;
use crate::error::Result;
use crate::fields::{scale_sample, FieldEvaluator, FieldSample, Filter};
use crate::geometry::{derive_mapping_params, MappingParams};
use crate::series::{basis_coeffs, load_coeffs, BasisCoeffs, LoadCoeffs};
use crate::solver::{RhSystem, SeriesSolution};
use crate::time_model::TimeWeights;

#[derive(Debug, Clone)]
pub struct TunnelModel {
    pub config: ProblemConfig,
    pub params: MappingParams,
    pub basis: BasisCoeffs,
    pub loads: LoadCoeffs,
    pub solution: SeriesSolution,
    pub weights: TimeWeights,
    /// Wall time of basis, loads and iteration, seconds.
    pub solve_seconds: f64,
}

impl TunnelModel {
    pub fn build(config: &ProblemConfig) -> Result<Self> {
        config.validate()?;
        let started = Instant::now();
        let params = derive_mapping_params(&config.geometry)?;
        let n = config.truncation.n;
        let kappa = config.material.kappa();
        let basis = basis_coeffs(kappa, params.theta0, 2 * n + 2);
        let loads = load_coeffs(config.material.k0, &params, &config.truncation)?;
        let system = RhSystem::new(&basis, &params, kappa, n)?;
        let solution = system.solve(&loads, config.material.gamma, &config.truncation)?;
        let solve_seconds = started.elapsed().as_secs_f64();
        let weights = TimeWeights::build(&config.material, &config.schedule, config.geometry.radius)?;
        Ok(Self {
            config: config.clone(),
            params,
            basis,
            loads,
            solution,
            weights,
            solve_seconds,
        })
    }

    pub fn evaluator(&self) -> FieldEvaluator<'_> {
        FieldEvaluator::new(&self.solution, self.params)
    }

    /// Plane snapshot at a physical point; surface points use `ρ = 1` exactly.
    pub fn plane_at(&self, z: Complex64, filter: Filter) -> Result<FieldSample> {
        let ev = self.evaluator();
        if z.im == 0.0 {
            ev.plane_at_surface(z.re, filter)
        } else {
            ev.plane_at(z, filter)
        }
    }

    /// Time-restored sample at a physical point and grid time.
    pub fn sample(&self, z: Complex64, t: f64, filter: Filter) -> Result<FieldSample> {
        let plane = self.plane_at(z, filter)?;
        let (u, i) = self.weights.at(t)?;
        Ok(scale_sample(&plane, u, i, t))
    }

    /// Point on the tunnel wall at local angle `theta`, evaluated on the inner circle exactly.
    pub fn plane_on_wall(&self, theta: f64, filter: Filter) -> Result<FieldSample> {
        let z = self.config.geometry.periphery_point(theta);
        let zeta = self.params.forward(z)?;
        let mut s = self.evaluator().plane_sample(self.params.alpha, zeta.arg(), filter)?;
        s.z = z;
        Ok(s)
    }
}

//! Iterative solution of the truncated Riemann-Hilbert problem with the
//! tunnel-wall constraint.
//!
//! Unknowns are the real coefficients `f_n`, `-N <= n <= N`, of
//! `φ'(ζ) = X(ζ) Σ i f_n ζ^n`. The negative-index half is fixed by an
//! upper-triangular Toeplitz system built from the inner coefficients of `X`,
//! the non-negative half by one built from the outer coefficients. The two
//! halves couple only through the right-hand sides, which are iterated:
//! the zeroth pass carries the wall load, later passes carry the
//! geometric coupling of the previous increment.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TunnelError};
use crate::geometry::MappingParams;
use crate::series::{geometric_coeff, BasisCoeffs, Laurent, LoadCoeffs, TruncationConfig};

const DIVERGENCE_RUN: usize = 5;

/// Upper-triangular Toeplitz matrix given by its first row.
/// Row `k` reads `Σ_{j>=k} t_{j-k} x_j`.
#[derive(Debug, Clone)]
pub struct UpperToeplitz {
    first_row: Vec<Complex64>,
    condition: f64,
}

impl UpperToeplitz {
    /// Checks the diagonal and records a 1-norm condition estimate. The
    /// inverse of an upper-triangular Toeplitz matrix is again one, with
    /// first row the reciprocal power series of `t`.
    pub fn factor(first_row: Vec<Complex64>) -> Result<Self> {
        let n = first_row.len();
        let diag = first_row[0];
        let norm: f64 = first_row.iter().map(|v| v.norm()).sum();
        if !(diag.norm() > f64::EPSILON * norm.max(f64::MIN_POSITIVE)) {
            return Err(TunnelError::Singular {
                diag: diag.norm(),
                condition: f64::INFINITY,
            });
        }
        let mut inv = vec![Complex64::new(0.0, 0.0); n];
        inv[0] = 1.0 / diag;
        for m in 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 1..=m {
                s += first_row[j] * inv[m - j];
            }
            inv[m] = -s / diag;
        }
        let inv_norm: f64 = inv.iter().map(|v| v.norm()).sum();
        Ok(Self {
            first_row,
            condition: norm * inv_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        if col < row {
            Complex64::new(0.0, 0.0)
        } else {
            self.first_row[col - row]
        }
    }

    /// Back substitution.
    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        debug_assert_eq!(rhs.len(), n);
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for k in (0..n).rev() {
            let mut s = rhs[k];
            for j in k + 1..n {
                s -= self.first_row[j - k] * x[j];
            }
            x[k] = s / self.first_row[0];
        }
        x
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|k| (k..n).map(|j| self.first_row[j - k] * x[j]).sum())
            .collect()
    }
}

/// The converged coefficient set.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesSolution {
    pub n: usize,
    pub kappa: f64,
    /// `f_{-N}..f_N`, real after projection.
    pub f: Vec<f64>,
    /// `A_{-N}..A_N`.
    pub a: Laurent,
    /// `B_{-N}..B_N`.
    pub b: Laurent,
    /// Number of correction passes after the zeroth solve.
    pub iterations: usize,
    /// `max |f^(q)|` for q = 0, 1, ..., including the pass that met the threshold.
    pub residual_history: Vec<f64>,
    /// `max |Im f_n| / max |Re f_n|` before projection.
    pub imag_residue: f64,
    /// `|κ A_{-1} + B_{-1}|`.
    pub single_valuedness: f64,
    /// `|A_{-1} - B_{-1} - γ E_{-1}|`.
    pub resultant_residual: f64,
    pub condition_inner: f64,
    pub condition_outer: f64,
}

impl SeriesSolution {
    pub fn f_at(&self, n: i64) -> f64 {
        let idx = n + self.n as i64;
        if idx < 0 || idx as usize >= self.f.len() {
            0.0
        } else {
            self.f[idx as usize]
        }
    }
}

/// Coefficient vector `f_{-N}..f_N` in complex arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    /// `neg[j] = f_{-(j+1)}`, `j = 0..N-1`.
    pub neg: Vec<Complex64>,
    /// `pos[n] = f_n`, `n = 0..N`.
    pub pos: Vec<Complex64>,
}

impl Coefficients {
    pub fn zeros(n: usize) -> Self {
        Self {
            neg: vec![Complex64::new(0.0, 0.0); n],
            pos: vec![Complex64::new(0.0, 0.0); n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.neg.len()
    }

    #[inline]
    pub fn get(&self, n: i64) -> Complex64 {
        if n < 0 {
            self.neg.get((-n - 1) as usize).copied().unwrap_or_default()
        } else {
            self.pos.get(n as usize).copied().unwrap_or_default()
        }
    }

    pub fn set(&mut self, n: i64, v: Complex64) {
        if n < 0 {
            self.neg[(-n - 1) as usize] = v;
        } else {
            self.pos[n as usize] = v;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.neg
            .iter()
            .chain(&self.pos)
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.neg.iter_mut().zip(&other.neg) {
            *a += b;
        }
        for (a, b) in self.pos.iter_mut().zip(&other.pos) {
            *a += b;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            neg: self.neg.iter().map(|v| v * s).collect(),
            pos: self.pos.iter().map(|v| v * s).collect(),
        }
    }
}

/// Iteration-invariant pieces of the solve.
#[derive(Debug, Clone)]
pub struct RhSystem<'a> {
    pub basis: &'a BasisCoeffs,
    pub n: usize,
    pub alpha: f64,
    pub kappa: f64,
    inner: UpperToeplitz,
    outer: UpperToeplitz,
    /// `e_l(α) α^l` for `l = -1..=2N+1`, stored at `l + 1`.
    coupling: Vec<f64>,
}

impl<'a> RhSystem<'a> {
    pub fn new(basis: &'a BasisCoeffs, params: &MappingParams, kappa: f64, n: usize) -> Result<Self> {
        assert!(n >= 1);
        if basis.order() < 2 * n + 1 {
            return Err(crate::error::domain(
                "basis order",
                basis.order() as f64,
                format!(">= {}", 2 * n + 1),
            ));
        }
        let inner = UpperToeplitz::factor(basis.alpha_seq[..n].to_vec())?;
        let outer = UpperToeplitz::factor(basis.beta_seq[1..n + 2].to_vec())?;
        let alpha = params.alpha;
        let coupling = (-1..=(2 * n as i64 + 1))
            .map(|l| geometric_coeff(l, alpha) * alpha.powi(l as i32))
            .collect();
        Ok(Self {
            basis,
            n,
            alpha,
            kappa,
            inner,
            outer,
            coupling,
        })
    }

    pub fn inner_matrix(&self) -> &UpperToeplitz {
        &self.inner
    }

    pub fn outer_matrix(&self) -> &UpperToeplitz {
        &self.outer
    }

    #[inline]
    fn coupling(&self, l: i64) -> f64 {
        if l < -1 {
            0.0
        } else {
            self.coupling.get((l + 1) as usize).copied().unwrap_or(0.0)
        }
    }

    /// Right-hand sides of the zeroth pass.
    pub fn load_rhs(&self, loads: &LoadCoeffs, gamma: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.n;
        let e_m1 = loads.get(-1);
        let mut ra = vec![Complex64::new(0.0, 0.0); n];
        let mut rb = vec![Complex64::new(0.0, 0.0); n + 1];
        ra[0] = gamma * e_m1 / (1.0 + self.kappa);
        rb[0] = -self.kappa * gamma * e_m1 / (1.0 + self.kappa);
        let mut pow = 1.0;
        for k in 1..=n {
            pow *= self.alpha;
            if k < n {
                ra[k] = gamma * pow * loads.get(-(k as i64) - 1);
            }
            rb[k] = -gamma * pow * loads.get(k as i64 - 1);
        }
        (ra, rb)
    }

    /// Right-hand sides of a correction pass, from the previous increment's `A`, `B`.
    pub fn coupling_rhs(&self, a: &Laurent, b: &Laurent) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.n as i64;
        let mut ra = vec![Complex64::new(0.0, 0.0); self.n];
        let mut rb = vec![Complex64::new(0.0, 0.0); self.n + 1];
        let a2 = self.alpha * self.alpha;
        let mut a2k = 1.0;
        for k in 1..=n {
            a2k *= a2;
            if k < n {
                let mut s = Complex64::new(0.0, 0.0);
                for l in -1..=(n - k) {
                    s += self.coupling(l) * a.get(l + k);
                }
                ra[k as usize] = a2k * b.get(-k - 1) + (k as f64 * a2k) * s;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for l in (k - n).max(-1)..=(k + n) {
                s += self.coupling(l) * a.get(l - k);
            }
            rb[k as usize] = a2k * a.get(k - 1) + k as f64 * s;
        }
        (ra, rb)
    }

    fn solve_halves(&self, ra: &[Complex64], rb: &[Complex64]) -> Coefficients {
        Coefficients {
            neg: self.inner.solve(ra),
            pos: self.outer.solve(rb),
        }
    }

    pub fn solve_zeroth(&self, loads: &LoadCoeffs, gamma: f64) -> Coefficients {
        let (ra, rb) = self.load_rhs(loads, gamma);
        self.solve_halves(&ra, &rb)
    }

    pub fn ab_from_f(&self, f: &Coefficients) -> (Laurent, Laurent) {
        ab_from_f(f, self.basis)
    }

    /// One correction pass: `f^(q) -> f^(q+1)`.
    pub fn iterate(&self, f: &Coefficients) -> Coefficients {
        let (a, b) = self.ab_from_f(f);
        let (ra, rb) = self.coupling_rhs(&a, &b);
        self.solve_halves(&ra, &rb)
    }

    /// Residuals of the full coupled system for an accumulated `f`, rows `k = 0..N-1`.
    pub fn coupled_residual(&self, f: &Coefficients, loads: &LoadCoeffs, gamma: f64) -> f64 {
        let (a, b) = self.ab_from_f(f);
        let (la, lb) = self.load_rhs(loads, gamma);
        let (ca, cb) = self.coupling_rhs(&a, &b);
        let lhs_a = self.inner.apply(&f.neg);
        let lhs_b = self.outer.apply(&f.pos);
        let mut worst: f64 = 0.0;
        for k in 0..self.n {
            worst = worst.max((lhs_a[k] - la[k] - ca[k]).norm());
            worst = worst.max((lhs_b[k] - lb[k] - cb[k]).norm());
        }
        worst
    }

    pub fn solve(
        &self,
        loads: &LoadCoeffs,
        gamma: f64,
        trunc: &TruncationConfig,
    ) -> Result<SeriesSolution> {
        let mut increment = self.solve_zeroth(loads, gamma);
        let mut total = increment.clone();
        let mut history = vec![increment.max_abs()];
        let mut rising = 0usize;
        let mut iterations = 0usize;
        if history[0] > trunc.eps {
            loop {
                if iterations >= trunc.max_iter {
                    return Err(TunnelError::NonConvergence {
                        max_iter: trunc.max_iter,
                        last: *history.last().unwrap(),
                        eps: trunc.eps,
                        history,
                    });
                }
                let next = self.iterate(&increment);
                let size = next.max_abs();
                iterations += 1;
                let prev = *history.last().unwrap();
                history.push(size);
                if !size.is_finite() {
                    return Err(TunnelError::Divergence {
                        iterations,
                        last: size,
                    });
                }
                if size <= trunc.eps {
                    break;
                }
                rising = if size > prev { rising + 1 } else { 0 };
                if rising >= DIVERGENCE_RUN {
                    return Err(TunnelError::Divergence {
                        iterations,
                        last: size,
                    });
                }
                total.add_assign(&next);
                increment = next;
            }
        }
        Ok(self.finish(total, loads, gamma, iterations, history))
    }

    fn finish(
        &self,
        total: Coefficients,
        loads: &LoadCoeffs,
        gamma: f64,
        iterations: usize,
        history: Vec<f64>,
    ) -> SeriesSolution {
        let n = self.n as i64;
        let max_re = total
            .neg
            .iter()
            .chain(&total.pos)
            .map(|v| v.re.abs())
            .fold(0.0, f64::max);
        let max_im = total
            .neg
            .iter()
            .chain(&total.pos)
            .map(|v| v.im.abs())
            .fold(0.0, f64::max);
        let imag_residue = if max_re > 0.0 { max_im / max_re } else { 0.0 };

        let mut real = Coefficients::zeros(self.n);
        let mut f = Vec::with_capacity(2 * self.n + 1);
        for k in -n..=n {
            let v = total.get(k).re;
            real.set(k, Complex64::new(v, 0.0));
            f.push(v);
        }
        let (a, b) = self.ab_from_f(&real);
        let single_valuedness = (self.kappa * a.get(-1) + b.get(-1)).norm();
        let resultant_residual = (a.get(-1) - b.get(-1) - gamma * loads.get(-1)).norm();
        SeriesSolution {
            n: self.n,
            kappa: self.kappa,
            f,
            a,
            b,
            iterations,
            residual_history: history,
            imag_residue,
            single_valuedness,
            resultant_residual,
            condition_inner: self.inner.condition(),
            condition_outer: self.outer.condition(),
        }
    }
}

/// `A_k = Σ_{n=-k}^{N} α_{n+k} f_{-n}` and `B_k = Σ_{n=k+1}^{N} β_{n-k} f_n`
/// for `-N <= k <= N`, with `f` read as zero outside `[-N, N]`.
pub fn ab_from_f(f: &Coefficients, basis: &BasisCoeffs) -> (Laurent, Laurent) {
    let n = f.n() as i64;
    let mut a = Laurent::zeros(-n, n);
    let mut b = Laurent::zeros(-n, n);
    for k in -n..=n {
        // A_k: m = -n runs over [-N, min(k, N)], coefficient α_{k-m}
        let mut s = Complex64::new(0.0, 0.0);
        for m in -n..=k.min(n) {
            s += basis.alpha_k(k - m) * f.get(m);
        }
        a.set(k, s);
        let mut s = Complex64::new(0.0, 0.0);
        for m in (k + 1).max(-n)..=n {
            s += basis.beta_k(m - k) * f.get(m);
        }
        b.set(k, s);
    }
    (a, b)
}

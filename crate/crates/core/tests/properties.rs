mod common;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use shallow_tunnel::config::{reference_config, ProblemConfig};
use shallow_tunnel::fields::{lanczos, Filter};
use shallow_tunnel::geometry::{derive_mapping_params, TunnelGeometry};
use shallow_tunnel::model::TunnelModel;
use shallow_tunnel::run::fmt_f64;
use shallow_tunnel::series::{basis_coeffs, geometric_coeff, product_series_check};
use shallow_tunnel::solver::{ab_from_f, Coefficients};
use shallow_tunnel::time_model::{equivalent_coefficient, TimeWeights};

fn small_config() -> ProblemConfig {
    let mut cfg = reference_config();
    cfg.truncation.n = 24;
    cfg.truncation.m = 60;
    cfg.truncation.l_samples = 1024;
    cfg
}

fn small_model() -> &'static TunnelModel {
    static M: OnceLock<TunnelModel> = OnceLock::new();
    M.get_or_init(|| common::build(&small_config()))
}

proptest! {
    #[test]
    fn map_round_trip(r in 0.5f64..20.0, h_ratio in 1.2f64..8.0, x in -150.0f64..150.0, y in -150.0f64..0.0) {
        let geom = TunnelGeometry::new(r, h_ratio * r, 20.0 * r);
        let p = derive_mapping_params(&geom).unwrap();
        let z = Complex64::new(x, y);
        prop_assume!(geom.contains(z));
        let zeta = p.forward(z).unwrap();
        prop_assert!(p.in_annulus(zeta));
        let back = p.backward(zeta).unwrap();
        prop_assert!((back - z).norm() <= 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn wall_maps_to_inner_circle(r in 0.5f64..20.0, h_ratio in 1.05f64..8.0, th in 0.0f64..(2.0 * PI)) {
        let geom = TunnelGeometry::new(r, h_ratio * r, 20.0 * r);
        let p = derive_mapping_params(&geom).unwrap();
        let zeta = p.forward(geom.periphery_point(th)).unwrap();
        prop_assert!((zeta.norm() - p.alpha).abs() <= 1e-10);
    }

    #[test]
    fn geometric_tail_sums_to_closed_form(rho in 0.05f64..0.95, k in 0i64..40) {
        let partial: f64 = (0..=k).map(|l| geometric_coeff(l, rho)).sum();
        let total = (1.0 - rho * rho).powi(2) / (1.0 - rho);
        let tail = (1.0 - rho * rho).powi(2) * rho.powi(k as i32 + 1) / (1.0 - rho);
        prop_assert!((total - partial - tail).abs() <= 1e-12 * total);
        prop_assert_eq!(geometric_coeff(-2 - k, rho), 0.0);
    }

    #[test]
    fn plemelj_product_matches_series(nu in 0.0f64..0.49, theta0 in 0.3f64..2.8, pr in 0.0f64..0.5, pa in 0.0f64..(2.0 * PI)) {
        let basis = basis_coeffs(3.0 - 4.0 * nu, theta0, 200);
        let err = product_series_check(&basis, Complex64::from_polar(pr, pa)).unwrap();
        prop_assert!(err <= 1e-9, "err = {}", err);
    }

    #[test]
    fn lanczos_factor_is_even_and_bounded(k in -200i64..200, n in 2usize..200) {
        let s = lanczos(k, n);
        prop_assert_eq!(s, lanczos(-k, n));
        prop_assert!(s <= 1.0 && s >= -0.2173);
    }

    #[test]
    fn release_coefficient_is_monotone(nu in 0.0f64..0.49, t in 100.0f64..119.9, dt in 0.0f64..0.1) {
        let mut cfg = reference_config();
        cfg.material.nu = nu;
        let s = &cfg.schedule;
        let r = cfg.geometry.radius;
        let a = equivalent_coefficient(t, &cfg.material, s, r).unwrap();
        let b = equivalent_coefficient(t + dt, &cfg.material, s, r).unwrap();
        prop_assert!(b >= a - 1e-15);
        prop_assert!(a > 0.0 && a <= 1.0);
    }

    #[test]
    fn fmt_round_trips_bits(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integral_weight_is_nondecreasing(g_e in 0.0f64..2000.0, eta in 1e3f64..1e7, rate in 0.2f64..5.0) {
        let mut cfg = reference_config();
        cfg.material.g_e = g_e;
        cfg.material.eta_e = eta;
        cfg.schedule.rate = rate;
        let w = TimeWeights::build(&cfg.material, &cfg.schedule, cfg.geometry.radius).unwrap();
        for pair in w.i_vals.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-15 * pair[0].abs());
        }
        for pair in w.u_vals.windows(2) {
            prop_assert!(pair[1] >= pair[0]);
        }
    }

    #[test]
    fn displacement_recovery_is_linear(re in prop::collection::vec(-1.0f64..1.0, 49), im in prop::collection::vec(-1.0f64..1.0, 49), s in -3.0f64..3.0) {
        let basis = &small_model().basis;
        let mut f1 = Coefficients::zeros(24);
        let mut f2 = Coefficients::zeros(24);
        for (j, n) in (-24i64..=24).enumerate() {
            f1.set(n, Complex64::new(re[j], 0.0));
            f2.set(n, Complex64::new(im[j], 0.0));
        }
        let mut sum = f1.scaled(s);
        sum.add_assign(&f2);
        let (a1, b1) = ab_from_f(&f1, basis);
        let (a2, b2) = ab_from_f(&f2, basis);
        let (a, b) = ab_from_f(&sum, basis);
        let scale = 1.0 + a1.max_abs() + a2.max_abs() + b1.max_abs() + b2.max_abs();
        for k in a.lo()..=a.hi() {
            prop_assert!((a.get(k) - (a1.get(k) * s + a2.get(k))).norm() <= 1e-12 * scale);
        }
        for k in b.lo()..=b.hi() {
            prop_assert!((b.get(k) - (b1.get(k) * s + b2.get(k))).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn trace_is_frame_invariant(rf in 0.0f64..1.0, th in 0.05f64..6.2) {
        let m = small_model();
        let rho = m.params.alpha + (1.0 - m.params.alpha) * rf;
        let s = m.evaluator().plane_sample(rho, th, Filter::Off).unwrap();
        let a = s.sigma_rho + s.sigma_theta;
        let b = s.sigma_x + s.sigma_y;
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn solution_is_linear_in_unit_weight(gamma in 0.5f64..50.0) {
        let base = small_model();
        let mut cfg = small_config();
        cfg.material.gamma = gamma;
        let m = common::build(&cfg);
        let ratio = gamma / base.config.material.gamma;
        let scale = base.solution.f.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        for (x, y) in m.solution.f.iter().zip(&base.solution.f) {
            prop_assert!((x - ratio * y).abs() <= 1e-8 * ratio * scale);
        }
    }
}

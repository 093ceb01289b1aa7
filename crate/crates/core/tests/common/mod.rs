#![allow(dead_code)]

use std::sync::OnceLock;

use shallow_tunnel::config::{reference_config, ProblemConfig};
use shallow_tunnel::model::TunnelModel;

pub fn reference() -> &'static TunnelModel {
    static M: OnceLock<TunnelModel> = OnceLock::new();
    M.get_or_init(|| TunnelModel::build(&reference_config()).expect("reference case solves"))
}

pub fn build(cfg: &ProblemConfig) -> TunnelModel {
    TunnelModel::build(cfg).expect("model builds")
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

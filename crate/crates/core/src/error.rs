use thiserror::Error;

/// Everything that can go wrong between reading a config and emitting fields.
#[derive(Debug, Error)]
pub enum TunnelError {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("point {0} is a pole of the conformal map")]
    Pole(String),

    #[error("{what} = {value} is outside the admissible domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    #[error("singular triangular system: diagonal entry {diag:e} (condition estimate {condition:e})")]
    Singular { diag: f64, condition: f64 },

    #[error("iteration diverged after {iterations} steps (last max|f| = {last:e})")]
    Divergence { iterations: usize, last: f64 },

    #[error("no convergence within {max_iter} iterations (last max|f| = {last:e}, threshold {eps:e})")]
    NonConvergence {
        max_iter: usize,
        last: f64,
        eps: f64,
        history: Vec<f64>,
    },

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, TunnelError>;

pub(crate) fn domain(what: &'static str, value: f64, domain: impl Into<String>) -> TunnelError {
    TunnelError::Domain {
        what,
        value,
        domain: domain.into(),
    }
}

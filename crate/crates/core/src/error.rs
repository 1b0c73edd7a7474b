use std::fmt;

use thiserror::Error;

/// One problem found while validating a scenario document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    /// Dotted path of the offending field, e.g. `outputs.summary_json`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is not an integer multiple of the voxel pitch")]
    NonCommensurate { what: &'static str, value: f64 },

    #[error(
        "contrast {kappa} sits on the polarizability pole (|1 + Q_F alpha0 kappa| = {distance:e})"
    )]
    PoleContrast { kappa: f64, distance: f64 },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("grid has no voxels")]
    EmptyGrid,

    #[error("Green's function evaluated at coincident points (distance {distance:e})")]
    SingularArguments { distance: f64 },

    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(f64),

    #[error("matrix is not symmetric (defect {defect:e}, scale {scale:e})")]
    NotSymmetric { defect: f64, scale: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "solver did not converge after {iterations} iterations (best estimate {best_estimate:?})"
    )]
    NoConvergence {
        iterations: usize,
        best_estimate: Option<f64>,
    },

    #[error("matrix is singular to working precision (smallest pivot {pivot:e}, norm {norm:e})")]
    Singular { pivot: f64, norm: f64 },

    #[error("linear solve residual {residual:e} exceeds bound {bound:e}")]
    InaccurateSolve { residual: f64, bound: f64 },

    #[error("problem size N = {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("invalid configuration: {}", format_issues(.0))]
    Config(Vec<ConfigIssue>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

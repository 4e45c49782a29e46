use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid quantale value {0}: must be a non-negative number or +inf")]
    InvalidValue(f64),

    #[error("value {0} is outside the unit interval")]
    OutOfUnitInterval(f64),

    #[error("{context}: expected dimension {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{0}: input is empty")]
    Empty(&'static str),

    #[error("sampled functions do not share the same input list")]
    InputMismatch,

    #[error("sampled function is not composable: output {0:?} is not an input of the outer map")]
    NotComposable(Vec<f64>),

    #[error("sampled function has duplicate input {0:?}")]
    DuplicateInput(Vec<f64>),

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid factor grid: {0}")]
    InvalidGrid(String),

    #[error("invalid code partition: {0}")]
    InvalidPartition(String),

    #[error("schema error in {path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("{path}: expected {expected} data rows, found {found}")]
    RowCount {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("{path}: non-finite value at row {row}, column {column}")]
    NonFinite {
        path: PathBuf,
        row: usize,
        column: String,
    },

    #[error("{path}: dataset does not cover the full factor grid ({message})")]
    PartialGrid { path: PathBuf, message: String },

    #[error("invalid probability kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("{metric} does not support aggregator `{aggregator}`")]
    UnsupportedAggregator {
        metric: &'static str,
        aggregator: String,
    },

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("{method} did not converge after {iterations} iterations (best objective {best_objective})")]
    NonConvergence {
        method: &'static str,
        iterations: usize,
        best_objective: f64,
        best: Box<crate::solvers::AffineMap>,
    },

    #[error("{metric} (component {component}, fixed value {fixed_value}): {source}")]
    Metric {
        metric: &'static str,
        component: usize,
        fixed_value: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for failures raised by the numerical solvers rather than by bad input.
    pub fn is_solver_failure(&self) -> bool {
        match self {
            Error::Solver(_) | Error::NonConvergence { .. } => true,
            Error::Metric { source, .. } => source.is_solver_failure(),
            _ => false,
        }
    }
}

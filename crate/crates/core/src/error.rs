use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported statement at {line}:{column}: {message}")]
    Unsupported {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("qubit index {index} out of range for register `{register}` of size {size} (line {line})")]
    QubitOutOfRange {
        register: String,
        index: usize,
        size: usize,
        line: usize,
    },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("metric `{0}` is undefined for this input")]
    UndefinedMetric(&'static str),

    #[error("pagerank did not converge after {iterations} iterations (residual {residual:e})")]
    PagerankNotConverged { iterations: usize, residual: f64 },

    #[error("dependency graph contains a cycle")]
    CycleDetected,

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("circuit needs {needed} qubits but the device only has {available}")]
    TopologyTooSmall { needed: usize, available: usize },

    #[error("capacity infeasible: {0}")]
    CapacityInfeasible(String),

    #[error("clustering error: {0}")]
    Clustering(String),

    #[error("correlation error: {0}")]
    Correlation(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("nothing to do: {0}")]
    NoValidWork(String),

    #[error("malformed table: {0}")]
    Table(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

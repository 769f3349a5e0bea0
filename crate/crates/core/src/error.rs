use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("location ({x}, {y}) is outside the {region}")]
    Region {
        x: f64,
        y: f64,
        region: &'static str,
    },

    #[error("line {line}: unknown preprocessing category {value:?}")]
    UnknownCategory { value: String, line: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("fixture {fixture}, possession {possession}: {message}")]
    ConflictingOutcome {
        fixture: String,
        possession: u32,
        message: String,
    },

    #[error("unknown team {0:?}")]
    UnknownTeam(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid prior: {0}")]
    Prior(String),

    #[error(
        "exact enumeration needs {assignments} assignments (limit {limit}); use the Gibbs sampler"
    )]
    EnumerationBound { assignments: f64, limit: u64 },

    #[error("dirichlet fit: {0}")]
    Mle(String),

    #[error("centre {centre}: {source}")]
    Centre {
        centre: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("artifact {path}: {message}")]
    Artifact { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}

impl Error {
    /// Data-quality problems in user input, as opposed to artifact mismatches
    /// or invalid settings.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Region { .. }
                | Error::UnknownCategory { .. }
                | Error::Parse { .. }
                | Error::ConflictingOutcome { .. }
                | Error::UnknownTeam(_)
                | Error::Prior(_)
                | Error::Csv(_)
        )
    }

    pub fn is_mismatch(&self) -> bool {
        matches!(self, Error::GridMismatch(_) | Error::Artifact { .. })
    }
}

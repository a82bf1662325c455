use isocone::geometry::GeometryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    NotConicallyBounded(GeometryError),
    #[error("invalid body: {0}")]
    Geometry(GeometryError),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("{} check(s) failed: {}", .0.len(), .0.join("; "))]
    ChecksFailed(Vec<String>),
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::NoAsymptote { .. } | GeometryError::DegenerateSlope { .. } | GeometryError::ConeCrossCheck { .. } => {
                CliError::NotConicallyBounded(e)
            }
            other => CliError::Geometry(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::NotConicallyBounded(_) | CliError::Geometry(_) => 2,
            CliError::Io(_) => 1,
            CliError::Compute(_) | CliError::ChecksFailed(_) => 3,
        }
    }
}

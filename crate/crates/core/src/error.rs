use thiserror::Error;

/// Errors raised across the crate.
///
/// Variant names double as the diagnostic tag printed by the command line
/// (see [`Error::name`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("direction between coincident points is undefined")]
    DegenerateDirection,

    #[error("invalid facet {id}: {reason}")]
    InvalidFacet { id: u32, reason: String },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("channel snapshot contains no paths")]
    NoPaths,

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("delay is infeasible: c*tau = {path_length} m does not exceed the endpoint distance {baseline} m")]
    InfeasibleDelay { path_length: f64, baseline: f64 },

    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    #[error("zero-length segment between consecutive path vertices {0} and {1}")]
    DegenerateSegment(usize, usize),

    #[error("construction not applicable: {0}")]
    NotApplicable(String),

    #[error("HPC event does not match the calibration schedule at step {t}")]
    ScheduleMismatch { t: u64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("point cloud map is empty")]
    EmptyMap,

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short variant name, stable across releases.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateDirection => "DegenerateDirection",
            Error::InvalidFacet { .. } => "InvalidFacet",
            Error::InvalidMesh(_) => "InvalidMesh",
            Error::InvalidPath(_) => "InvalidPath",
            Error::NoPaths => "NoPaths",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::EmptyDataset => "EmptyDataset",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InfeasibleDelay { .. } => "InfeasibleDelay",
            Error::SingularGeometry(_) => "SingularGeometry",
            Error::DegenerateSegment(..) => "DegenerateSegment",
            Error::NotApplicable(_) => "NotApplicable",
            Error::ScheduleMismatch { .. } => "ScheduleMismatch",
            Error::InvalidScenario(_) => "InvalidScenario",
            Error::EmptyMap => "EmptyMap",
            Error::Format { .. } => "FormatError",
            Error::Io(_) => "IoError",
        }
    }

    /// True for errors caused by the numbers themselves rather than by
    /// malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateDirection
                | Error::InfeasibleDelay { .. }
                | Error::SingularGeometry(_)
                | Error::DegenerateSegment(..)
                | Error::NotApplicable(_)
                | Error::NoPaths
                | Error::EmptyMap
        )
    }

    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("counts have zero total mass")]
    ZeroTotalCounts,

    #[error("EM step degenerated: all mass explained by the background")]
    DegenerateStep,

    #[error("corpus has no tokens")]
    EmptyCorpus,

    #[error("every document is empty after preprocessing")]
    AllDocumentsEmpty,

    #[error("input is empty")]
    EmptyInput,

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("scores contain a single class; both labels are required")]
    SingleClass,

    #[error("infeasible configuration: {0}")]
    ConfigInfeasible(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

/// Failure classes that map onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Internal,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::Internal => 4,
        }
    }
}

impl Error {
    pub fn in_stage(stage: &'static str, err: Error) -> Error {
        Error::Stage {
            stage,
            source: Box::new(err),
        }
    }

    pub fn io(path: impl Into<String>, source: io::Error) -> Error {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn json(context: impl Into<String>, source: serde_json::Error) -> Error {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    /// Stable machine-readable code, printed as the prefix of CLI error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroTotalCounts => "ZERO_TOTAL_COUNTS",
            Error::DegenerateStep => "DEGENERATE_STEP",
            Error::EmptyCorpus => "EMPTY_CORPUS",
            Error::AllDocumentsEmpty => "ALL_DOCUMENTS_EMPTY",
            Error::EmptyInput => "EMPTY_INPUT",
            Error::ZeroVector => "ZERO_VECTOR",
            Error::SingleClass => "SINGLE_CLASS",
            Error::ConfigInfeasible(_) => "CONFIG_INFEASIBLE",
            Error::InvalidConfig(_) => "INVALID_CONFIG",
            Error::ShapeMismatch(_) => "SHAPE_MISMATCH",
            Error::InvalidData(_) => "INVALID_DATA",
            Error::Stage { source, .. } => source.code(),
            Error::Io { .. } => "IO",
            Error::Json { .. } => "PARSE",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::ConfigInfeasible(_) | Error::InvalidConfig(_) => ErrorClass::Config,
            Error::ZeroTotalCounts
            | Error::EmptyCorpus
            | Error::AllDocumentsEmpty
            | Error::EmptyInput
            | Error::ZeroVector
            | Error::SingleClass
            | Error::ShapeMismatch(_)
            | Error::InvalidData(_)
            | Error::Io { .. }
            | Error::Json { .. } => ErrorClass::Data,
            Error::DegenerateStep => ErrorClass::Internal,
            Error::Stage { source, .. } => source.class(),
        }
    }
}

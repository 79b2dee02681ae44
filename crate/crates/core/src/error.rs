use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: unknown discourse class in sense {sense:?}")]
    UnknownClass { line: usize, sense: String },

    #[error("line {line}: {message}")]
    DanglingSpan { line: usize, message: String },

    #[error(
        "line {line}: duplicate sentence (section {section}, file {file}, sentence {sentence})"
    )]
    DuplicateSentence {
        line: usize,
        section: u8,
        file: u16,
        sentence: usize,
    },

    #[error("unknown discourse class in sense {0:?}")]
    UnknownSense(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("infeasible synthetic corpus: {0}")]
    Infeasible(String),

    #[error("line {line}: schema violation: {message}")]
    Schema { line: usize, message: String },

    #[error("example has an empty {0}")]
    EmptyArgument(&'static str),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("training diverged at epoch {epoch}: loss = {loss}")]
    Diverged { epoch: usize, loss: f64 },

    #[error("confusion matrix is empty")]
    EmptyConfusionMatrix,

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("missing input: {}", .0.display())]
    MissingInput(PathBuf),

    /// An error raised while reading a specific file.
    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    /// Stable machine-readable identifier, used by the command-line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed { .. } => "malformed_line",
            Error::UnknownClass { .. } | Error::UnknownSense(_) => "unknown_class",
            Error::DanglingSpan { .. } => "dangling_span",
            Error::DuplicateSentence { .. } => "duplicate_sentence",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Infeasible(_) => "infeasible_config",
            Error::Schema { .. } => "schema_violation",
            Error::EmptyArgument(_) => "empty_argument",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::EmptyTrainingSet => "empty_training_set",
            Error::Diverged { .. } => "diverged",
            Error::EmptyConfusionMatrix => "empty_confusion_matrix",
            Error::InvalidSample(_) => "invalid_sample",
            Error::MissingInput(_) => "missing_input",
            Error::InFile { source, .. } => source.kind(),
            Error::Io { .. } => "io",
            Error::Json { .. } => "json",
        }
    }

    pub(crate) fn in_file(path: &std::path::Path, source: Error) -> Self {
        Error::InFile {
            path: path.to_path_buf(),
            source: Box::new(source),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

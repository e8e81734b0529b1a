use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An operator parameter is outside its valid domain.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// A scheme needs ground-truth statistics that were not supplied.
    #[error("missing ground-truth context: {0}")]
    Context(String),

    #[error("dimension mismatch: expected {expected_width}x{expected_height}, got {width}x{height}")]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    /// Component pixels fall outside the image they are rendered into.
    #[error("corrupted component {label}: pixel ({row}, {col}) outside {width}x{height}")]
    CorruptComponent {
        label: u32,
        row: usize,
        col: usize,
        width: usize,
        height: usize,
    },

    #[error("{}format error at byte {offset}: {message}", path_prefix(.path))]
    Format {
        path: Option<PathBuf>,
        offset: usize,
        message: String,
    },

    #[error("{}line {line}: {message}", path_prefix(.path))]
    GroundTruth {
        path: Option<PathBuf>,
        line: u64,
        message: String,
    },

    /// Vehicle rectangles could not be packed into the frame.
    #[error("could not place vehicle {index} after {attempts} attempts; try fewer vehicles or a smaller separation")]
    Packing { index: usize, attempts: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{}{source}", path_prefix(.path))]
    Io {
        path: Option<PathBuf>,
        #[source]
        source: io::Error,
    },
}

fn path_prefix(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => format!("{}: ", p.display()),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: Some(path.into()),
            source,
        }
    }

    pub(crate) fn format(offset: usize, message: impl Into<String>) -> Self {
        Error::Format {
            path: None,
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn with_path(self, p: impl Into<PathBuf>) -> Self {
        match self {
            Error::Format {
                offset, message, ..
            } => Error::Format {
                path: Some(p.into()),
                offset,
                message,
            },
            Error::GroundTruth { line, message, .. } => Error::GroundTruth {
                path: Some(p.into()),
                line,
                message,
            },
            Error::Io { source, .. } => Error::Io {
                path: Some(p.into()),
                source,
            },
            other => other,
        }
    }

    /// True for errors that originate from files or the filesystem.
    pub fn is_io_or_format(&self) -> bool {
        matches!(
            self,
            Error::Io { .. } | Error::Format { .. } | Error::GroundTruth { .. }
        )
    }
}

impl From<io::Error> for Error {
    fn from(source: io::Error) -> Self {
        Error::Io { path: None, source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A symmetric matrix failed the relative eigenvalue threshold.
    #[error(
        "singular matrix ({context}): eigenvalue {eigenvalue:e} below threshold {threshold:e}"
    )]
    SingularMatrix {
        context: String,
        eigenvalue: f64,
        threshold: f64,
    },

    /// Forecast errors carry no usable dispersion.
    #[error("degenerate forecast errors: {0}")]
    DegenerateErrors(String),

    /// A required CSV column is absent.
    #[error("missing column {0:?}")]
    MissingColumn(String),

    /// A CSV cell could not be parsed as a number.
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Re-label a singular-matrix error with the caller's context.
    pub(crate) fn with_context(self, context: &str) -> Self {
        match self {
            Error::SingularMatrix {
                eigenvalue,
                threshold,
                ..
            } => Error::SingularMatrix {
                context: context.to_string(),
                eigenvalue,
                threshold,
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

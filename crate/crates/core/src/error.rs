use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors shared by every module of the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments or a request the operation does not support.
    #[error("usage error: {0}")]
    Usage(String),
    /// Operands that do not fit together, such as elements of different carriers.
    #[error("structural error: {0}")]
    Structural(String),
    /// A configured cap was hit.
    #[error("resource limit: {what} exceeds cap {cap}")]
    Resource { what: String, cap: u64 },
    /// Malformed input file, located by line/column or field path.
    #[error("format error at {location}: {message}")]
    Format { location: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn resource(what: impl Into<String>, cap: u64) -> Self {
        Error::Resource {
            what: what.into(),
            cap,
        }
    }
}

use std::path::PathBuf;

/// Library-wide error type.
///
/// `Domain` covers mathematical preconditions (a parameter outside its range,
/// an infeasible request). `Data` covers malformed input files and carries the
/// 1-based line number of the offending record. `Io` wraps filesystem failures
/// together with the path that produced them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Domain(String),

    #[error("invalid data in {path} at line {line}: {msg}")]
    Data {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

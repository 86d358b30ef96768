use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A JSON line failed to parse. `line` is 1-based, `path` is the JSON path
    /// of the offending value (e.g. `labels[0].start`).
    #[error("line {line}: {message} (at `{path}`)")]
    Json {
        line: usize,
        path: String,
        message: String,
    },

    #[error("knowledge base file `{file}` is missing")]
    MissingKbFile { file: String },

    #[error("{file}:{line}: malformed row: {message}")]
    MalformedRow {
        file: String,
        line: usize,
        message: String,
    },

    #[error("turtle syntax error at {line}:{column}: {message}")]
    Turtle {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("NIF: {0}")]
    Nif(String),

    #[error("AIDA-CoNLL line {line}: {message}")]
    Conll { line: usize, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error("alignment: {0}")]
    Alignment(String),

    #[error("workspace: {0}")]
    Workspace(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }
}

/// Deserialize one JSON line, reporting the line number and the JSON path of
/// the first error.
pub(crate) fn from_json_line<T: serde::de::DeserializeOwned>(line: &str, line_no: usize) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(line);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        Error::Json {
            line: line_no,
            path,
            message: err.into_inner().to_string(),
        }
    })?;
    de.end().map_err(|err| Error::Json {
        line: line_no,
        path: ".".to_string(),
        message: err.to_string(),
    })?;
    Ok(value)
}

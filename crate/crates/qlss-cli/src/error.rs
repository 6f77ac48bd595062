use qlss::QlssError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Qlss(#[from] QlssError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("parse error in field `{field}`: {msg}")]
    Parse { field: String, msg: String },
    #[error("unsupported instance version {found}, expected {expected}")]
    Version { found: u64, expected: u64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot plot an empty series")]
    EmptySeries,
    #[error("{0}")]
    VerificationFailed(String),
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Qlss(e) => e.code(),
            CliError::Io { .. } => "io_error",
            CliError::Parse { .. } => "parse_error",
            CliError::Version { .. } => "version_error",
            CliError::Config(_) => "config_error",
            CliError::EmptySeries => "empty_series",
            CliError::VerificationFailed(_) => "verification_failed",
        }
    }

    /// `{"error": code, "message": text}` on one line.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorJson { error: self.code(), message: self.to_string() }).expect("error json")
    }

    pub fn io(path: impl AsRef<std::path::Path>, e: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), msg: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

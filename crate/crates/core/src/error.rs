use std::path::PathBuf;

/// Errors surfaced by the analyzer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("root directory not readable: {path}: {reason}")]
    RootUnreadable { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("extension `{extension}` claimed by both `{first}` and `{second}`")]
    ExtensionConflict {
        extension: String,
        first: String,
        second: String,
    },

    #[error("invalid rule file: {}", .0.join("; "))]
    InvalidRules(Vec<String>),

    #[error("unknown rule id `{0}`")]
    UnknownRule(String),

    #[error("line {line} of `{file}` is outside the file ({line_count} lines)")]
    LineOutOfBounds {
        file: String,
        line: u32,
        line_count: u32,
    },

    #[error("no LOC entry for `{0}`")]
    UnknownFile(String),

    #[error("checkpoint count must be at least 1")]
    EmptyTrajectory,

    #[error("checkpoints without timestamps: {0:?}")]
    MissingTimestamps(Vec<usize>),

    #[error("not a git repository: {path}: {reason}")]
    NotARepository { path: PathBuf, reason: String },

    #[error("git error: {0}")]
    Git(#[from] git2::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use std::path::PathBuf;

use thiserror::Error;

use crate::model::Finding;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("citing publications window must span at least 2 years, got {n}")]
    WindowTooShort { n: usize },

    #[error("citing publications window has no citing publications")]
    ZeroTotal,

    #[error("publication age must be at least 1, got {age}")]
    InvalidAge { age: u32 },

    #[error("no admissible observation year in {from}..={to}")]
    EmptyRange { from: i32, to: i32 },

    #[error("profile has no points")]
    EmptyProfile,

    #[error("fluctuation span must cover at least 2 years, got {k}")]
    InvalidSpan { k: usize },

    #[error("dataset has no citing records")]
    NoCitingRecords,

    #[error("unknown publication id `{0}`")]
    UnknownPublication(String),

    #[error("cohort has no candidates")]
    EmptyCohort,

    #[error("candidate `{id}`: {reason}")]
    InvalidCandidate { id: String, reason: String },

    #[error("malformed document: {0}")]
    Syntax(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("invalid dataset: {}", .findings.first().map(|f| f.message.as_str()).unwrap_or("unknown"))]
    InvalidDataset { findings: Vec<Finding> },

    #[error("counts file line {line}: {message}")]
    Counts { line: u64, message: String },

    #[error("manifest line {line}: {message}")]
    Manifest { line: u64, message: String },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

use std::path::PathBuf;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location of a problem inside an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub file: String,
    /// 1-based line (papers file) or row (citations file, header is row 1).
    pub line: usize,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.file, self.line)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("author record has an empty display name (persistent id: {})", persistent_id.as_deref().unwrap_or("none"))]
    EmptyAuthorName { persistent_id: Option<String> },

    #[error("corpus is invalid: {}", summarize_violations(.0))]
    InvalidCorpus(Vec<Violation>),

    #[error("unknown paper id {0:?}")]
    UnknownPaper(String),

    #[error("unknown author key {key:?} ({known} known author keys in corpus)")]
    UnknownAuthor { key: String, known: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{location}: {reason}")]
    Parse { location: Location, reason: String },

    #[error("{} errors while parsing; first: {}", .0.len(), .0.first().map(ToString::to_string).unwrap_or_default())]
    Multiple(Vec<Error>),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),

    #[error("invalid harvest configuration: {0}")]
    Config(String),

    #[error("fetch failed for {url}: {reason}")]
    Fetch { url: String, reason: String },

    #[error("malformed response for request {request_key}: {reason}")]
    Decode { request_key: String, reason: String },

    #[error("author {0:?} not found")]
    NotFound(String),
}

impl Error {
    pub(crate) fn parse(file: &str, line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            location: Location {
                file: file.to_string(),
                line,
            },
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

fn summarize_violations(v: &[Violation]) -> String {
    let mut out = format!("{} violation(s)", v.len());
    for violation in v.iter().take(5) {
        out.push_str("; ");
        out.push_str(&violation.to_string());
    }
    if v.len() > 5 {
        out.push_str("; ...");
    }
    out
}

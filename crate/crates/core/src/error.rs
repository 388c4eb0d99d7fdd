use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus root {}: {source}", path.display())]
    Root {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid glob `{pattern}`: {message}")]
    Glob { pattern: String, message: String },
    #[error("component map line {line}: {message}")]
    ComponentMap { line: usize, message: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("rating sheets `{0}` and `{1}` do not cover the same records")]
    KeyMismatch(String, String),
    #[error("need at least two rating sheets, got {0}")]
    TooFewSheets(usize),
    #[error("cannot draw {requested} items from a population of {population}")]
    SampleTooLarge { requested: usize, population: usize },
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: line {line}, column {column}: {message}", path.display())]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: unsupported format version {found} (expected {expected})", path.display())]
    Version { path: PathBuf, found: u64, expected: u64 },
    #[error("{}: {message}", path.display())]
    Csv { path: PathBuf, message: String },
}

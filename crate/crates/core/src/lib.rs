//! Locate C++ named casts, score them by how much information the cast
//! expression and its destination share, and rank the surprising ones.

pub mod analysis;
pub mod corpus;
pub mod entropy;
pub mod report;
pub mod subtokens;
pub mod syntax;

mod error;

pub use error::{AnalysisError, CorpusError, ReportError};

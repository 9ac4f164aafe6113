//! Sweep output writers: a pinned-schema CSV, a JSON mirror of the
//! record structure, and self-contained SVG plots.

pub mod csv;
pub mod json;
pub mod svg;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OutputError {
    #[error("no records to write")]
    EmptyInput,
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

//! Deterministic CSV and JSON encodings of sensor samples, plus the
//! on-disk session layout.
//!
//! Every sensor has a fixed column order: `timestampNanos,relativeSeconds`
//! followed by its payload fields. `relativeSeconds` is printed with nine
//! decimals and payload decimals with six. JSON objects carry the keys
//! `sensorType`, `timestampNanos`, `relativeSeconds` and `data`, in that
//! order.

mod csv;
mod json;
mod records;
pub mod session;

use std::fmt;

use thiserror::Error;

use crate::payload::SchemaMismatch;

pub use self::csv::{csv_columns, csv_header, csv_row, parse_csv_row};
pub use self::json::{from_json, to_json};
pub use self::session::{
    convert, read_session_file, render_session_file, sensor_file_name, Manifest, ManifestSensor,
    SessionFormat, SessionWriter, CSV_MAGIC, MANIFEST_FILE,
};

/// Position-tagged parse failure. Lines and columns are 1-based; the column
/// counts characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    /// Re-bases a single-line error onto line `line` of a file.
    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ParseError at line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

#[derive(Debug, Error)]
pub enum SerializationError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    SchemaMismatch(#[from] SchemaMismatch),
    #[error("unrecognised session file name `{0}`")]
    UnknownFileName(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl SerializationError {
    pub fn line(mut self, line: usize) -> Self {
        if let SerializationError::Parse(p) = &mut self {
            p.line = line;
        }
        self
    }
}

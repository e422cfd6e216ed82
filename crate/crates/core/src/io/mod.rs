//! File formats and rendering: tileset files (TOML), assembly snapshots
//! (line-oriented text), traces (JSON), and ASCII/PBM bitmaps.

mod render;
mod snapshot;
mod tileset;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use render::{render, Format};
pub use snapshot::{Snapshot, SNAPSHOT_VERSION};
pub use tileset::{emit_tileset, parse_tileset, TILESET_FORMAT_VERSION};

use crate::atam::Trace;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {field}: {message}")]
    Parse { line: usize, field: String, message: String },
}

impl FormatError {
    pub(crate) fn parse(line: usize, field: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Parse { line, field: field.into(), message: message.into() }
    }
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_owned(), source })
}

/// Write `bytes` to `path`, or to stdout when the path is "-".
pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), FormatError> {
    use std::io::Write;
    let res = if path.as_os_str() == "-" {
        std::io::stdout().write_all(bytes)
    } else {
        std::fs::write(path, bytes)
    };
    res.map_err(|source| FormatError::Io { path: path.to_owned(), source })
}

pub fn emit_trace(t: &Trace) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("traces serialize");
    s.push('\n');
    s
}

pub fn parse_trace(text: &str) -> Result<Trace, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::parse(e.line(), "trace", e.to_string()))
}

/// 1-based line holding byte `offset`.
pub(crate) fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

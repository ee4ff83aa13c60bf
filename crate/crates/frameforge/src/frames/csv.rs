//! Frame CSV format: a `dim=N` header line, then one comma-separated row
//! per vector. Entries are decimal or `p/q` rational literals. Every entry
//! is kept exactly (a decimal literal is a rational), so frames read from
//! CSV always carry an exact twin; in rational mode the writer emits `p/q`
//! literals and read-back is bit-exact.

use std::path::Path;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::exact::{parse_q, q_to_string};
use crate::linalg::ScalarMode;

pub fn parse_frame_str(text: &str) -> Result<Frame> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty frame file".into()))?;
    let dim: usize = header
        .strip_prefix("dim=")
        .ok_or_else(|| Error::Parse(format!("expected `dim=N` header, found `{header}`")))?
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension in header `{header}`")))?;
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let mut row = Vec::with_capacity(dim);
        for field in line.split(',') {
            row.push(parse_q(field).map_err(|e| {
                Error::Parse(format!("row {}: {e}", lineno + 1))
            })?);
        }
        if row.len() != dim {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {dim}",
                lineno + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    Frame::from_rational(dim, rows)
}

pub fn read_frame(path: &Path) -> Result<Frame> {
    parse_frame_str(&std::fs::read_to_string(path)?)
}

/// Renders a frame. Float mode writes shortest round-trip decimals of the
/// float view; exact mode writes reduced `p/q` literals and requires the
/// frame to carry exact entries.
pub fn frame_to_string(f: &Frame, mode: ScalarMode) -> Result<String> {
    let mut out = format!("dim={}\n", f.dim());
    match mode {
        ScalarMode::Float => {
            for v in f.vectors() {
                let fields: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
        ScalarMode::Exact => {
            let rows = f.exact_vectors().ok_or(Error::ExactUnavailable)?;
            for v in rows {
                let fields: Vec<String> = v.iter().map(q_to_string).collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
    }
    Ok(out)
}

pub fn write_frame(path: &Path, f: &Frame, mode: ScalarMode) -> Result<()> {
    std::fs::write(path, frame_to_string(f, mode)?)?;
    Ok(())
}

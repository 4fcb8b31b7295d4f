//! Two-column `item_id<TAB>label` files.
//!
//! Blank lines are ignored, and so is a first row whose first cell is
//! `item_id`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const HEADER: &str = "item_id\tlabel";

pub fn parse_labels(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut cells = line.split('\t');
        let (id, label) = match (cells.next(), cells.next(), cells.next()) {
            (Some(id), Some(label), None) => (id.trim(), label.trim()),
            _ => {
                return Err(Error::Format {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: "expected two tab-separated columns".into(),
                })
            }
        };
        if rows.is_empty() && id == "item_id" {
            continue;
        }
        if id.is_empty() || label.is_empty() {
            return Err(Error::Format {
                path: path.to_path_buf(),
                line: i + 1,
                message: "empty item id or label".into(),
            });
        }
        rows.push((id.to_string(), label.to_string()));
    }
    Ok(rows)
}

pub fn read_labels(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text, path)
}

pub fn format_labels<'a>(rows: impl IntoIterator<Item = (&'a str, &'a str)>) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for (id, label) in rows {
        let _ = writeln!(out, "{id}\t{label}");
    }
    out
}

pub fn write_labels<'a>(path: &Path, rows: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<()> {
    fs::write(path, format_labels(rows)).map_err(|e| Error::io(path, e))
}

/// Class labels, one per line, lowest class first.
pub fn read_scale_file(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

//! Row rendering (CSV / JSON lines) and atomic output.

use crate::Format;
use anyhow::{Context, Result};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// A typed output row: a CSV schema plus a verdict on its theorem-backed
/// checks (`None` when the row asserts nothing).
pub trait Row: Serialize {
    fn csv_header() -> String;
    fn csv_record(&self) -> String;
    fn verdict(&self) -> Option<bool> {
        None
    }
}

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders rows in the requested format; returns the text and whether every
/// row's checks hold.
pub fn render<T: Row>(
    rows: &[T],
    format: Format,
    preamble: Option<String>,
) -> Result<(String, bool)> {
    let mut text = String::new();
    match format {
        Format::Csv => {
            if let Some(p) = &preamble {
                text.push_str(&format!("# {p}\n"));
            }
            text.push_str(&T::csv_header());
            text.push('\n');
            for r in rows {
                text.push_str(&r.csv_record());
                text.push('\n');
            }
        }
        Format::JsonLines => {
            for r in rows {
                text.push_str(&serde_json::to_string(r).context("serializing row")?);
                text.push('\n');
            }
        }
    }
    let all_hold = rows.iter().all(|r| r.verdict().unwrap_or(true));
    Ok((text, all_hold))
}

/// Writes to stdout, or atomically (temp file + rename) to `path`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .context("writing to stdout")?;
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut tmp = match dir {
                Some(d) => tempfile::NamedTempFile::new_in(d),
                None => tempfile::NamedTempFile::new(),
            }
            .context("creating temporary output file")?;
            tmp.write_all(text.as_bytes()).context("writing output")?;
            tmp.persist(path)
                .with_context(|| format!("renaming output into {}", path.display()))?;
        }
    }
    Ok(())
}

//! Text tables, canonical JSON and CSV.

use anyhow::Context;
use serde::Serialize;

use crate::Failure;

/// Pretty JSON with keys in sorted order, newline terminated.
pub fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let value = serde_json::to_value(value)
        .context("encoding JSON")
        .map_err(Failure::Io)?;
    let mut out = serde_json::to_string_pretty(&value)
        .context("encoding JSON")
        .map_err(Failure::Io)?;
    out.push('\n');
    Ok(out)
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let result = writer
        .write_record(header)
        .and_then(|()| rows.iter().try_for_each(|row| writer.write_record(row)));
    result.context("encoding CSV").map_err(Failure::Io)?;
    let bytes = writer
        .into_inner()
        .map_err(|err| Failure::Io(err.into_error().into()))?;
    String::from_utf8(bytes)
        .context("encoding CSV")
        .map_err(Failure::Io)
}

/// An optional title line, then right-aligned columns under a header row.
pub fn table(title: Option<&str>, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (width, cell) in widths.iter_mut().zip(row) {
            *width = (*width).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let padded: Vec<String> = cells
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:>w$}"))
            .collect();
        padded.join("  ") + "\n"
    };
    let mut out = String::new();
    if let Some(title) = title {
        out.push_str(title);
        out.push('\n');
    }
    out.push_str(&line(&mut header.iter().copied()));
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    out
}

pub fn joined<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|item| item.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

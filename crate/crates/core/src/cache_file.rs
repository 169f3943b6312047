//! On-disk form of a [`DimCache`].
//!
//! ```text
//! sl2coh-cache v1
//! <p> <q> <r> <lambda> <dim>
//! ```
//!
//! One record per line, single-space separated, all decimal. Records are written in
//! key order so that saving a loaded file reproduces it byte for byte.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::engine::{ext_dim, DimCache, ExtKey};
use crate::weights::{Prime, Weight};

pub const HEADER: &str = "sl2coh-cache v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O failed: {0}")]
    Io(#[from] io::Error),
    #[error("unsupported cache format {found:?} (expected {HEADER:?})")]
    VersionMismatch { found: String },
    #[error("corrupted cache entry on line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
    #[error("cache entry {key} stores dimension {stored} but recomputes to {recomputed}")]
    Mismatch {
        key: ExtKey,
        stored: u64,
        recomputed: u64,
    },
}

/// Writes the cache and returns the number of records.
pub fn save<W: Write>(cache: &DimCache, out: W) -> io::Result<usize> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{HEADER}")?;
    let entries = cache.sorted_entries();
    for (key, dim) in &entries {
        writeln!(out, "{} {} {} {} {}", key.p, key.q, key.r, key.lambda, dim)?;
    }
    out.flush()?;
    Ok(entries.len())
}

pub fn save_to_path(cache: &DimCache, path: &Path) -> Result<usize, CacheError> {
    Ok(save(cache, File::create(path)?)?)
}

/// Reads a cache. An empty input is an empty cache.
pub fn load<R: BufRead>(input: R) -> Result<DimCache, CacheError> {
    let mut cache = DimCache::new();
    let mut lines = input.lines();
    match lines.next() {
        None => return Ok(cache),
        Some(header) => {
            let header = header?;
            if header != HEADER {
                return Err(CacheError::VersionMismatch { found: header });
            }
        }
    }
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        let (key, dim) = parse_record(&line).map_err(|reason| CacheError::Corrupt {
            line: line_no,
            reason,
        })?;
        if let Some(previous) = cache.insert(key.clone(), dim) {
            if previous != dim {
                return Err(CacheError::Corrupt {
                    line: line_no,
                    reason: format!("{key} repeated with dimensions {previous} and {dim}"),
                });
            }
        }
    }
    Ok(cache)
}

pub fn load_from_path(path: &Path) -> Result<DimCache, CacheError> {
    load(BufReader::new(File::open(path)?))
}

fn parse_record(line: &str) -> Result<(ExtKey, u64), String> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 5 {
        return Err(format!("expected 5 fields, found {}", fields.len()));
    }
    let p: Prime = fields[0].parse().map_err(|e| format!("p: {e}"))?;
    let q: u32 = parse_decimal(fields[1]).ok_or_else(|| format!("q: invalid {:?}", fields[1]))?;
    let r: Weight = fields[2].parse().map_err(|e| format!("r: {e}"))?;
    let lambda: Weight = fields[3].parse().map_err(|e| format!("lambda: {e}"))?;
    let dim: u64 =
        parse_decimal(fields[4]).ok_or_else(|| format!("dim: invalid {:?}", fields[4]))?;
    Ok((ExtKey { p, q, r, lambda }, dim))
}

fn parse_decimal<T: std::str::FromStr>(field: &str) -> Option<T> {
    if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    field.parse().ok()
}

/// Recomputes every entry from scratch and returns how many were checked.
///
/// Fails on the first mismatch in key order.
pub fn verify(cache: &DimCache) -> Result<usize, CacheError> {
    let mut fresh = DimCache::new();
    let entries = cache.sorted_entries();
    for (key, stored) in &entries {
        let recomputed = ext_dim(key.q, &key.r, &key.lambda, key.p, &mut fresh);
        if recomputed != *stored {
            return Err(CacheError::Mismatch {
                key: (*key).clone(),
                stored: *stored,
                recomputed,
            });
        }
    }
    Ok(entries.len())
}

//! Bounded scans over weights and the cross-checks built on them.
//!
//! All bounds are inclusive. Scans visit only the two residue classes linked to
//! zero mod `2p`; every other weight has vanishing cohomology in positive degree.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::closed_forms::expected_cohomological;
use crate::engine::{h_dim, DimCache};
use crate::families::{expand, wq_families, FamilyError};
use crate::weights::{Prime, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("hypothesis p > q >= 1 violated: p = {p}, q = {q}")]
    HypothesisViolation { p: Prime, q: u32 },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub lambda: Weight,
    pub dim: u64,
    pub untwisted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub p: Prime,
    pub q: u32,
    pub bound: Weight,
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    pub fn weights(&self) -> BTreeSet<Weight> {
        self.rows.iter().map(|row| row.lambda.clone()).collect()
    }
}

/// Weights `≤ bound` congruent to `0` or `−2` mod `2p`, increasing:
/// `0, 2p − 2, 2p, 4p − 2, 4p, ...`
pub fn linked_to_zero_upto(p: Prime, bound: &Weight) -> impl Iterator<Item = Weight> + '_ {
    let step = BigUint::from(p.linkage_modulus());
    let mut multiple = BigUint::from(0u32);
    let mut emit_multiple = true;
    std::iter::from_fn(move || {
        let next = if emit_multiple {
            multiple.clone()
        } else {
            multiple += &step;
            &multiple - 2u32
        };
        emit_multiple = !emit_multiple;
        Some(Weight::from(next))
    })
    .take_while(move |w| w <= bound)
}

fn scan_row(q: u32, lambda: Weight, p: Prime, cache: &mut DimCache) -> Option<ScanRow> {
    let dim = h_dim(q, &lambda, p, cache);
    if dim == 0 {
        return None;
    }
    let untwisted = match lambda.checked_div_exact(p) {
        Some(inner) => h_dim(q, &inner, p, cache) == 0,
        None => true,
    };
    Some(ScanRow {
        lambda,
        dim,
        untwisted,
    })
}

/// Every `λ ≤ bound` with `H^q(SL2, L(λ)) ≠ 0`.
pub fn scan_cohomological(q: u32, p: Prime, bound: &Weight, cache: &mut DimCache) -> ScanResult {
    let rows = linked_to_zero_upto(p, bound)
        .filter_map(|lambda| scan_row(q, lambda, p, cache))
        .collect();
    ScanResult {
        p,
        q,
        bound: bound.clone(),
        rows,
    }
}

/// [`scan_cohomological`] split across the rayon pool. Each chunk runs on a
/// private cache; the chunk caches are merged into `cache` afterwards.
pub fn par_scan_cohomological(
    q: u32,
    p: Prime,
    bound: &Weight,
    cache: &mut DimCache,
) -> ScanResult {
    const CHUNK: usize = 512;
    let candidates: Vec<Weight> = linked_to_zero_upto(p, bound).collect();
    let pieces: Vec<(Vec<ScanRow>, DimCache)> = candidates
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut local = DimCache::new();
            let rows = chunk
                .iter()
                .filter_map(|lambda| scan_row(q, lambda.clone(), p, &mut local))
                .collect();
            (rows, local)
        })
        .collect();
    let mut rows = Vec::new();
    for (chunk_rows, local) in pieces {
        rows.extend(chunk_rows);
        cache.merge(local);
    }
    ScanResult {
        p,
        q,
        bound: bound.clone(),
        rows,
    }
}

/// The maximally untwisted rows of [`scan_cohomological`].
pub fn scan_untwisted(q: u32, p: Prime, bound: &Weight, cache: &mut DimCache) -> ScanResult {
    let mut result = scan_cohomological(q, p, bound, cache);
    result.rows.retain(|row| row.untwisted);
    result
}

/// Largest `dim H^q` seen up to the bound; a lower bound for the true maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaBound {
    pub p: Prime,
    pub q: u32,
    pub bound: Weight,
    pub max_dim: u64,
    pub argmax: Vec<Weight>,
}

pub fn gamma_lower_bound(q: u32, p: Prime, bound: &Weight, cache: &mut DimCache) -> GammaBound {
    let mut max_dim = 0;
    let mut argmax = Vec::new();
    for lambda in linked_to_zero_upto(p, bound) {
        let dim = h_dim(q, &lambda, p, cache);
        if dim == 0 || dim < max_dim {
            continue;
        }
        if dim > max_dim {
            max_dim = dim;
            argmax.clear();
        }
        argmax.push(lambda);
    }
    GammaBound {
        p,
        q,
        bound: bound.clone(),
        max_dim,
        argmax,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimMismatch {
    pub lambda: Weight,
    pub expected_dim: u64,
    pub actual_dim: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub p: Prime,
    pub q: u32,
    pub bound: Weight,
    pub status: CheckStatus,
    pub expected: BTreeSet<Weight>,
    pub actual: BTreeSet<Weight>,
    pub dim_mismatches: Vec<DimMismatch>,
}

impl CheckReport {
    fn new(
        name: String,
        (p, q, bound): (Prime, u32, &Weight),
        expected: BTreeSet<Weight>,
        actual: BTreeSet<Weight>,
        dim_mismatches: Vec<DimMismatch>,
    ) -> Self {
        let status = if expected == actual && dim_mismatches.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckReport {
            name,
            p,
            q,
            bound: bound.clone(),
            status,
            expected,
            actual,
            dim_mismatches,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// Expected but not found.
    pub fn missing(&self) -> Vec<&Weight> {
        self.expected.difference(&self.actual).collect()
    }

    /// Found but not expected.
    pub fn unexpected(&self) -> Vec<&Weight> {
        self.actual.difference(&self.expected).collect()
    }
}

/// Compares the family expansion of degree `q` with the engine's maximally
/// untwisted weights, and checks every such weight has dimension one.
pub fn cross_check_wq(
    q: u32,
    p: Prime,
    bound: &Weight,
    cache: &mut DimCache,
) -> Result<CheckReport, EnumerateError> {
    if q == 0 || p.value() <= u64::from(q) {
        return Err(EnumerateError::HypothesisViolation { p, q });
    }
    let expected = expand(&wq_families(q), p, bound)?.concrete;
    let scan = scan_untwisted(q, p, bound, cache);
    let dim_mismatches = scan
        .rows
        .iter()
        .filter(|row| row.dim != 1)
        .map(|row| DimMismatch {
            lambda: row.lambda.clone(),
            expected_dim: 1,
            actual_dim: row.dim,
        })
        .collect();
    Ok(CheckReport::new(
        format!("wq q={q} p={p}"),
        (p, q, bound),
        expected,
        scan.weights(),
        dim_mismatches,
    ))
}

/// Checks the tabulated closed forms for `q = 1, 2, 3` against full scans.
pub fn verify_theorem_a(p: Prime, bound: &Weight, cache: &mut DimCache) -> Vec<CheckReport> {
    (1..=3)
        .map(|q| {
            let expected = expected_cohomological(q, p, bound);
            let scan = scan_cohomological(q, p, bound, cache);
            let dim_mismatches = scan
                .rows
                .iter()
                .filter_map(|row| {
                    let expected_dim = *expected.get(&row.lambda)?;
                    (expected_dim != row.dim).then(|| DimMismatch {
                        lambda: row.lambda.clone(),
                        expected_dim,
                        actual_dim: row.dim,
                    })
                })
                .collect();
            CheckReport::new(
                format!("closed-forms q={q} p={p}"),
                (p, q, bound),
                expected.into_keys().collect(),
                scan.weights(),
                dim_mismatches,
            )
        })
        .collect()
}

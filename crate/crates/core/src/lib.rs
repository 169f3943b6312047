//! Exact dimensions of `Ext^q(Δ(r), L(λ))` and `H^q(SL2, L(λ))` for the simple
//! modules of SL2 over an algebraically closed field of characteristic `p`.
//!
//! The pieces:
//!
//! * [`weights`]: dominant weights, digit splits, linkage, twists, the shift `λ ∥ n`.
//! * [`engine`]: the memoized digit recursion computing Ext dimensions.
//! * [`cache_file`]: the versioned text format for engine caches.
//! * [`families`]: symbolic families of maximally untwisted cohomological weights.
//! * [`enumerate`]: bounded scans and cross-checks.
//! * [`closed_forms`]: tabulated weight lists for degrees one to three.

pub mod cache_file;
pub mod closed_forms;
pub mod engine;
pub mod enumerate;
pub mod families;
pub mod weights;

pub use engine::{ext_dim, h_dim, is_maximally_untwisted, CacheStats, DimCache, ExtKey};
pub use enumerate::{
    cross_check_wq, gamma_lower_bound, scan_cohomological, scan_untwisted, verify_theorem_a,
    CheckReport, CheckStatus, GammaBound, ScanResult, ScanRow,
};
pub use families::{
    evaluate, expand, render, to_symbolic, wq_families, ExpansionReport, FamilyExpr, SymbolicWeight,
};
pub use weights::{Prime, Weight};

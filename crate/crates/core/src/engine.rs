//! Memoized computation of `dim Ext^q(Δ(r), L(λ))` in characteristic `p`.
//!
//! The recursion peels one base-`p` digit off both `r` and `λ` per step:
//!
//! 1. `q = 0`: the group is nonzero only for `λ = r`, where it is one-dimensional.
//! 2. Unlinked pairs vanish.
//! 3. `Ext^q(Δ(0), L(0)) = 0` for `q > 0`.
//! 4. Otherwise split `r = p·r′ + r₀`, `λ = p·λ′ + λ₀` and, for odd `p`:
//!    * `r₀ = p − 1`: Steinberg cancellation, `Ext^q(Δ(r′), L(λ′))`;
//!    * `λ₀ = r₀`: `Σ_{n even ≤ q} Ext^{q−n}(Δ(n + r′), L(λ′))`;
//!    * `λ₀ = p − 2 − r₀`: the same sum over odd `n`.
//!
//!    For `p = 2` an odd `r` cancels the Steinberg factor `L(1)` in the same way,
//!    and an even `r` sums over every `n ≤ q`.
//!
//! Every recursive call strictly lowers `(q, λ, r)` lexicographically: the
//! `n = 0` summand keeps `q` and lowers `λ` (or `r` when `λ = 0`), every other
//! summand lowers `q`. Debug builds assert this on each call.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::weights::{decompose, is_linked, Prime, Weight};

/// Index of one Ext group: `Ext^q(Δ(r), L(lambda))` over characteristic `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExtKey {
    pub p: Prime,
    pub q: u32,
    pub r: Weight,
    pub lambda: Weight,
}

impl fmt::Display for ExtKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(p={}, q={}, r={}, lambda={})",
            self.p, self.q, self.r, self.lambda
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

/// Memo table for [`ext_dim`], shared across degrees, weights and primes.
///
/// Only groups that needed a digit split are stored; the base cases are
/// cheaper to recompute than to look up.
#[derive(Debug, Clone, Default)]
pub struct DimCache {
    entries: HashMap<ExtKey, u64>,
    stats: CacheStats,
}

impl DimCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &ExtKey) -> Option<u64> {
        self.entries.get(key).copied()
    }

    pub fn stats(&self) -> CacheStats {
        self.stats
    }

    /// Inserts an entry, returning the previous value if there was one.
    pub fn insert(&mut self, key: ExtKey, dim: u64) -> Option<u64> {
        self.entries.insert(key, dim)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExtKey, u64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    /// Entries in key order, the order used on disk.
    pub fn sorted_entries(&self) -> Vec<(&ExtKey, u64)> {
        let mut entries: Vec<_> = self.iter().collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(b.0));
        entries
    }

    /// Union with another cache. Both caches hold values of the same pure
    /// function, so a key present in both must carry the same dimension.
    ///
    /// # Panics
    ///
    /// If the two caches disagree on some key.
    pub fn merge(&mut self, other: DimCache) {
        for (key, dim) in other.entries {
            match self.entries.get(&key) {
                Some(&existing) => assert_eq!(existing, dim, "cache merge conflict at {key}"),
                None => {
                    self.entries.insert(key, dim);
                }
            }
        }
        self.stats.hits += other.stats.hits;
        self.stats.misses += other.stats.misses;
    }
}

/// `dim Ext^q(Δ(r), L(λ))`.
///
/// # Panics
///
/// If a dimension overflows `u64`.
pub fn ext_dim(q: u32, r: &Weight, lambda: &Weight, p: Prime, cache: &mut DimCache) -> u64 {
    if q == 0 {
        return u64::from(lambda == r);
    }
    if !is_linked(lambda, r, p) {
        return 0;
    }
    if lambda.is_zero() && r.is_zero() {
        return 0;
    }

    let key = ExtKey {
        p,
        q,
        r: r.clone(),
        lambda: lambda.clone(),
    };
    if let Some(dim) = cache.entries.get(&key) {
        cache.stats.hits += 1;
        return *dim;
    }
    cache.stats.misses += 1;
    let dim = split_digit(q, r, lambda, p, cache);
    cache.entries.insert(key, dim);
    dim
}

fn split_digit(q: u32, r: &Weight, lambda: &Weight, p: Prime, cache: &mut DimCache) -> u64 {
    let r_split = decompose(r, p);
    let l_split = decompose(lambda, p);
    let (r_rest, r0) = (&r_split.quotient, r_split.digit);
    let (l_rest, l0) = (&l_split.quotient, l_split.digit);
    let top = p.value() - 1;

    let descend = |q_child: u32, r_child: &Weight, cache: &mut DimCache| {
        debug_assert!(
            (q_child, l_rest, r_child) < (q, lambda, r),
            "termination measure did not decrease: ({q}, {lambda}, {r}) -> ({q_child}, {l_rest}, {r_child})"
        );
        ext_dim(q_child, r_child, l_rest, p, cache)
    };

    if r0 == top {
        debug_assert_eq!(l0, top, "linkage forces the Steinberg digit on both sides");
        return descend(q, r_rest, cache);
    }

    let (even, odd) = if p.value() == 2 {
        // r0 = 0 and linkage forces l0 = 0; both parities contribute.
        (l0 == 0, l0 == 0)
    } else {
        let even = l0 == r0;
        let odd = l0 + r0 + 2 == p.value();
        debug_assert!(!(even && odd), "2·r0 = p − 2 has no solution for odd p");
        (even, odd)
    };

    let mut total: u64 = 0;
    for n in 0..=q {
        let wanted = if n % 2 == 0 { even } else { odd };
        if !wanted {
            continue;
        }
        let summand = descend(q - n, &(r_rest + u64::from(n)), cache);
        total = total
            .checked_add(summand)
            .expect("Ext dimension overflowed u64");
    }
    total
}

/// `dim H^q(SL2, L(λ)) = dim Ext^q(Δ(0), L(λ))`.
pub fn h_dim(q: u32, lambda: &Weight, p: Prime, cache: &mut DimCache) -> u64 {
    ext_dim(q, &Weight::zero(), lambda, p, cache)
}

/// `λ` is `q`-cohomological and is not the Frobenius twist of one.
pub fn is_maximally_untwisted(q: u32, lambda: &Weight, p: Prime, cache: &mut DimCache) -> bool {
    if h_dim(q, lambda, p, cache) == 0 {
        return false;
    }
    match lambda.checked_div_exact(p) {
        Some(untwisted) => h_dim(q, &untwisted, p, cache) == 0,
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: u64) -> Weight {
        Weight::from(v)
    }

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn ext_examples() {
        let mut cache = DimCache::new();
        assert_eq!(ext_dim(0, &w(7), &w(7), p(5), &mut cache), 1);
        assert_eq!(ext_dim(1, &w(0), &w(8), p(5), &mut cache), 1);
        assert_eq!(ext_dim(1, &w(0), &w(6), p(5), &mut cache), 0);
        assert_eq!(ext_dim(2, &w(0), &w(38), p(5), &mut cache), 1);
        assert_eq!(ext_dim(1, &w(1), &w(7), p(5), &mut cache), 1);
        assert_eq!(ext_dim(3, &w(0), &w(36), p(2), &mut cache), 2);
        assert_eq!(ext_dim(3, &w(0), &w(18), p(2), &mut cache), 1);
    }

    #[test]
    fn h_examples() {
        let mut cache = DimCache::new();
        assert_eq!(h_dim(2, &w(10), p(5), &mut cache), 1);
        assert_eq!(h_dim(2, &w(11), p(5), &mut cache), 0);
        assert_eq!(h_dim(3, &w(18), p(5), &mut cache), 1);
    }

    #[test]
    fn untwisted_examples() {
        let mut cache = DimCache::new();
        assert!(is_maximally_untwisted(1, &w(8), p(5), &mut cache));
        assert!(!is_maximally_untwisted(1, &w(40), p(5), &mut cache));
        assert!(!is_maximally_untwisted(1, &w(6), p(5), &mut cache));
    }

    #[test]
    fn trivial_module_has_no_higher_cohomology() {
        let mut cache = DimCache::new();
        for prime in [2, 3, 5, 7] {
            assert_eq!(h_dim(0, &w(0), p(prime), &mut cache), 1);
            for q in 1..6 {
                assert_eq!(h_dim(q, &w(0), p(prime), &mut cache), 0);
            }
        }
    }

    #[test]
    fn huge_weights_recurse_shallowly() {
        // p^40 (2p − 2): a 40-fold twist of the unique untwisted 1-cohomological weight.
        let mut cache = DimCache::new();
        let lambda = crate::weights::frobenius_twist(&w(8), p(5), 40);
        assert_eq!(h_dim(1, &lambda, p(5), &mut cache), 1);
        assert_eq!(h_dim(1, &(&lambda + 10), p(5), &mut cache), 0);
    }

    #[test]
    fn cache_counts_hits() {
        let mut cache = DimCache::new();
        h_dim(3, &w(210), p(5), &mut cache);
        let misses = cache.stats().misses;
        assert!(misses > 0);
        h_dim(3, &w(210), p(5), &mut cache);
        assert_eq!(cache.stats().misses, misses);
        assert!(cache.stats().hits >= 1);
    }

    #[test]
    fn merge_unions_equal_caches() {
        let mut a = DimCache::new();
        let mut b = DimCache::new();
        h_dim(3, &w(210), p(5), &mut a);
        h_dim(3, &w(238), p(5), &mut b);
        h_dim(3, &w(210), p(5), &mut b);
        let expected: usize = {
            let mut keys: std::collections::HashSet<_> = a.iter().map(|(k, _)| k.clone()).collect();
            keys.extend(b.iter().map(|(k, _)| k.clone()));
            keys.len()
        };
        a.merge(b);
        assert_eq!(a.len(), expected);
    }

    #[test]
    #[should_panic(expected = "cache merge conflict")]
    fn merge_rejects_conflicts() {
        let key = ExtKey {
            p: p(5),
            q: 1,
            r: w(0),
            lambda: w(8),
        };
        let mut a = DimCache::new();
        a.insert(key.clone(), 1);
        let mut b = DimCache::new();
        b.insert(key, 2);
        a.merge(b);
    }
}

//! Structural identities the Ext recursion has to satisfy, checked over desk-scale ranges.

use sl2coh::enumerate::linked_to_zero_upto;
use sl2coh::weights::{linked_to_zero, residue_class, shift, ResidueClass};
use sl2coh::{ext_dim, h_dim, DimCache, Prime, Weight};

fn p(v: u64) -> Prime {
    Prime::new(v).unwrap()
}

#[test]
fn cold_and_warm_caches_agree() {
    for prime in [2, 3, 5, 7] {
        let prime = p(prime);
        let mut warm = DimCache::new();
        for q in 0..=4 {
            for lambda in 0..=5000u64 {
                let lambda = Weight::from(lambda);
                let hot = h_dim(q, &lambda, prime, &mut warm);
                let cold = h_dim(q, &lambda, prime, &mut DimCache::new());
                assert_eq!(hot, cold, "q={q} lambda={lambda} p={prime}");
            }
        }
        assert!(warm.stats().hits > 0);
    }
}

#[test]
fn cohomology_vanishes_off_the_linkage_classes() {
    let mut cache = DimCache::new();
    for prime in [2, 3, 5, 7] {
        for q in 1..=4 {
            for lambda in 0..=3000u64 {
                let lambda = Weight::from(lambda);
                if h_dim(q, &lambda, p(prime), &mut cache) > 0 {
                    assert!(
                        linked_to_zero(&lambda, p(prime)),
                        "q={q} lambda={lambda} p={prime}"
                    );
                }
            }
        }
    }
}

#[test]
fn degree_zero_detects_the_trivial_module() {
    let mut cache = DimCache::new();
    for prime in [2, 3, 5, 7] {
        for lambda in 0..=500u64 {
            assert_eq!(
                h_dim(0, &Weight::from(lambda), p(prime), &mut cache),
                u64::from(lambda == 0)
            );
        }
    }
}

#[test]
fn twisting_preserves_dimension_when_p_exceeds_q() {
    let mut cache = DimCache::new();
    for prime in [5, 7] {
        let prime = p(prime);
        for q in 1..=4 {
            for lambda in linked_to_zero_upto(prime, &Weight::from(2000)) {
                let twisted = &lambda * prime.value();
                assert_eq!(
                    h_dim(q, &lambda, prime, &mut cache),
                    h_dim(q, &twisted, prime, &mut cache),
                    "q={q} lambda={lambda} p={prime}"
                );
            }
        }
    }
}

#[test]
fn twisting_never_kills_cohomology() {
    let mut cache = DimCache::new();
    for (prime, max_q) in [(5, 4), (7, 4), (2, 3)] {
        let prime = p(prime);
        for q in 1..=max_q {
            for lambda in linked_to_zero_upto(prime, &Weight::from(2000)) {
                if h_dim(q, &lambda, prime, &mut cache) > 0 {
                    let twisted = &lambda * prime.value();
                    assert!(
                        h_dim(q, &twisted, prime, &mut cache) > 0,
                        "q={q} lambda={lambda} p={prime}"
                    );
                }
            }
        }
    }
}

#[test]
fn translation_to_nonzero_weyl_index() {
    let mut cache = DimCache::new();
    for prime in [5, 7] {
        let prime = p(prime);
        for lambda in linked_to_zero_upto(prime, &Weight::from(2000)) {
            for i in 0..=3 {
                let base = h_dim(i, &lambda, prime, &mut cache);
                for n in 0..=prime.value() - 2 {
                    let moved = match residue_class(&lambda, prime).unwrap() {
                        ResidueClass::Zero => Some(&lambda + n),
                        ResidueClass::MinusTwo => lambda.checked_sub(n),
                    };
                    let Some(moved) = moved else { continue };
                    assert_eq!(
                        ext_dim(i, &Weight::from(n), &moved, prime, &mut cache),
                        base,
                        "i={i} n={n} lambda={lambda} p={prime}"
                    );
                }
            }
        }
    }
}

#[test]
fn shifting_raises_the_degree() {
    let mut cache = DimCache::new();
    for prime in [5, 7] {
        let prime = p(prime);
        for q in 1..=4u32 {
            for n in 1..=q {
                for lambda in linked_to_zero_upto(prime, &Weight::from(3000)) {
                    if h_dim(q - n, &lambda, prime, &mut cache) == 0 {
                        continue;
                    }
                    let Ok(shifted) = shift(&lambda, u64::from(n), prime) else {
                        continue;
                    };
                    assert!(
                        h_dim(q, &shifted, prime, &mut cache) > 0,
                        "q={q} n={n} lambda={lambda} p={prime}"
                    );
                }
            }
        }
    }
}

#[test]
fn dimensions_are_at_most_one_when_p_exceeds_q() {
    let mut cache = DimCache::new();
    for prime in [5, 7] {
        for q in 0..=4 {
            for lambda in linked_to_zero_upto(p(prime), &Weight::from(10_000)) {
                assert!(
                    h_dim(q, &lambda, p(prime), &mut cache) <= 1,
                    "q={q} lambda={lambda} p={prime}"
                );
            }
        }
    }
}

#[test]
fn characteristic_two_exceeds_one_in_degree_three() {
    let mut cache = DimCache::new();
    assert_eq!(h_dim(3, &Weight::from(36), p(2), &mut cache), 2);
    assert_eq!(h_dim(3, &Weight::from(68), p(2), &mut cache), 2);
    assert_eq!(h_dim(3, &Weight::from(20), p(2), &mut cache), 1);
}

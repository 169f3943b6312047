use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use sl2coh::enumerate::{par_scan_cohomological, scan_cohomological};
use sl2coh::weights::frobenius_twist;
use sl2coh::{h_dim, DimCache, Prime, Weight};

fn cold_h_dim(c: &mut Criterion) {
    let mut group = c.benchmark_group("h_dim_cold");
    for (q, p, lambda) in [(3u32, 5u64, 238u64), (4, 7, 4702), (6, 2, 33_808)] {
        let prime = Prime::new(p).unwrap();
        let lambda = Weight::from(lambda);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("q{q}_p{p}_{lambda}")),
            &lambda,
            |b, lambda| b.iter(|| h_dim(q, black_box(lambda), prime, &mut DimCache::new())),
        );
    }
    group.finish();
}

fn deep_twist(c: &mut Criterion) {
    let p = Prime::new(5).unwrap();
    let lambda = frobenius_twist(&Weight::from(238), p, 40);
    c.bench_function("h_dim_cold_p5_twist40", |b| {
        b.iter(|| h_dim(3, black_box(&lambda), p, &mut DimCache::new()))
    });
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    let bound = Weight::from(10_000);
    for p in [2u64, 5] {
        let prime = Prime::new(p).unwrap();
        group.bench_function(format!("serial_q3_p{p}"), |b| {
            b.iter(|| scan_cohomological(3, prime, &bound, &mut DimCache::new()))
        });
        group.bench_function(format!("parallel_q3_p{p}"), |b| {
            b.iter(|| par_scan_cohomological(3, prime, &bound, &mut DimCache::new()))
        });
    }
    group.finish();
}

criterion_group!(benches, cold_h_dim, deep_twist, scans);
criterion_main!(benches);

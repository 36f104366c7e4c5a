use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use modform_core::certify::{bound_lower, find_omission, pointwise_dims, BoundSpec, Candidate, DimensionScanner, ScanConfig};
use modform_core::dimension::dim;
use modform_core::numthy::factorize;
use modform_core::signpattern::{builtin_fixtures, classify_sigma};
use modform_core::{SpaceKind, Weight};

fn levels(c: &mut Criterion) {
    let k = Weight::new(1).unwrap();
    let scanner = DimensionScanner::new(SpaceKind::New, k, 1 << 22).unwrap();
    let mut g = c.benchmark_group("levels");
    g.sample_size(20);
    g.bench_function("sieve 2^20 newspace", |b| b.iter(|| scanner.dims(black_box(1 << 21), (1 << 21) + (1 << 20) - 1).unwrap()));
    g.bench_function("pointwise 2^16 newspace", |b| {
        b.iter(|| pointwise_dims(SpaceKind::New, k, black_box(1 << 21), (1 << 21) + (1 << 16) - 1).unwrap())
    });
    g.finish();
}

fn single(c: &mut Criterion) {
    c.bench_function("factorize 2^61-1", |b| b.iter(|| factorize(black_box((1u64 << 61) - 1)).unwrap()));
    let n = factorize(2 * 3 * 5 * 7 * 11 * 13 * 17).unwrap();
    c.bench_function("dim full omega=7", |b| b.iter(|| dim(SpaceKind::Full, black_box(&n), Weight::new(6).unwrap()).unwrap()));
    let spec = BoundSpec::new(SpaceKind::New, Weight::new(1).unwrap());
    c.bench_function("bound_lower newspace", |b| b.iter(|| bound_lower(&spec, black_box(13_940_267))));
}

fn searches(c: &mut Criterion) {
    let mut g = c.benchmark_group("searches");
    g.sample_size(10);
    let cfg = ScanConfig::default();
    g.bench_function("omission full 2k=6", |b| {
        b.iter(|| find_omission(SpaceKind::Full, Weight::new(3).unwrap(), Candidate::Auto, &cfg).unwrap())
    });
    g.bench_function("classify sigma fixtures", |b| {
        b.iter_batched(builtin_fixtures, |lib| classify_sigma(&lib).unwrap(), BatchSize::SmallInput)
    });
    g.finish();
}

criterion_group!(benches, levels, single, searches);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ideal_lab_core::combinatorics::{
    certify_very_sparse, certify_very_sparse_seq, generate_very_sparse, GrowthRule,
};
use ideal_lab_core::convergence::{
    lemma_equal_valuation_violation, lemma_equal_valuation_violation_seq,
};
use ideal_lab_core::realization::{RealizedKind, RealizedSequence};
use ideal_lab_core::souslin::Scheme;

fn bench_certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("sparse_certification");
    for size in [8usize, 10, 12] {
        let set = generate_very_sparse(size, GrowthRule::default())
            .unwrap()
            .elements()
            .clone();
        group.bench_with_input(BenchmarkId::new("rayon", size), &set, |b, s| {
            b.iter(|| certify_very_sparse(s).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", size), &set, |b, s| {
            b.iter(|| certify_very_sparse_seq(s).unwrap())
        });
    }
    group.finish();
}

fn bench_valuation_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("valuation_lemma_scan");
    for bound in [1024u64, 4096] {
        group.bench_with_input(BenchmarkId::new("rayon", bound), &bound, |b, &n| {
            b.iter(|| lemma_equal_valuation_violation(n))
        });
        group.bench_with_input(BenchmarkId::new("sequential", bound), &bound, |b, &n| {
            b.iter(|| lemma_equal_valuation_violation_seq(n))
        });
    }
    group.finish();
}

fn bench_window_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("realized_window_build");
    group.sample_size(20);
    for bound in [64u64, 128] {
        group.bench_with_input(BenchmarkId::new("rayon", bound), &bound, |b, &n| {
            b.iter(|| {
                RealizedSequence::build(
                    RealizedKind::Ramsey,
                    Scheme::cantor_middle_thirds(),
                    12,
                    n,
                    None,
                )
                .unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", bound), &bound, |b, &n| {
            b.iter(|| {
                RealizedSequence::build_seq(
                    RealizedKind::Ramsey,
                    Scheme::cantor_middle_thirds(),
                    12,
                    n,
                    None,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_certification,
    bench_valuation_scan,
    bench_window_build
);
criterion_main!(benches);

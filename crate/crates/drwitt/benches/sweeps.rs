//! Compares the data-parallel sweep driver against its sequential fallback
//! on the two heaviest workloads: the full axiom battery at one level and a
//! slice of the three-factor associativity sweep.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use drwitt::check::{
    check_drw_axioms, check_poly_assoc_sweep, check_poly_products_vs_oracle, ExecMode,
};

fn modes() -> Vec<(&'static str, ExecMode)> {
    vec![
        ("parallel", ExecMode::Parallel),
        ("sequential", ExecMode::Sequential),
    ]
}

fn bench_axiom_battery(c: &mut Criterion) {
    let mut g = c.benchmark_group("drw_axioms_p2_n5");
    g.sample_size(10);
    for (label, mode) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(label), &mode, |b, &mode| {
            b.iter(|| {
                let reports = check_drw_axioms(2, 5, 64, 7, mode);
                assert!(reports.iter().all(|r| r.passed()));
                reports.len()
            })
        });
    }
    g.finish();
}

fn bench_product_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("poly_products_vs_oracle_n4");
    g.sample_size(10);
    for (label, mode) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(label), &mode, |b, &mode| {
            b.iter(|| {
                let reports = check_poly_products_vs_oracle(4, 40, 7, mode);
                assert!(reports.iter().all(|r| r.passed()));
                reports.len()
            })
        });
    }
    g.finish();
}

fn bench_assoc_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("poly_assoc_sweep_n4");
    g.sample_size(10);
    for (label, mode) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(label), &mode, |b, &mode| {
            b.iter(|| {
                let reports = check_poly_assoc_sweep(4, 6, 7, mode);
                assert!(reports.iter().all(|r| r.passed()));
                reports.len()
            })
        });
    }
    g.finish();
}

criterion_group!(
    sweeps,
    bench_axiom_battery,
    bench_product_oracle,
    bench_assoc_sweep
);
criterion_main!(sweeps);

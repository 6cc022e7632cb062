use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use schwarz_core::exactcore::int;
use schwarz_core::multiplier::{certified_lower_bound, test_family_quotient, PowerIteration};
use schwarz_core::norms::{koebe_growth_estimate, test_family_norm_sq, GridSpec, TestFamilyParams};
use schwarz_core::schwarzian::{build_f, higher_schwarzian};
use schwarz_core::{Complex64, ExactScalar, FunctionSpec, MultiplierProblem};

fn kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    g.sample_size(10);
    for order in [20, 40, 60] {
        g.bench_with_input(BenchmarkId::new("exact_koebe", order), &order, |b, &n| {
            b.iter(|| build_f::<ExactScalar>(&FunctionSpec::koebe(), black_box(n)).unwrap())
        });
    }
    let strip = FunctionSpec::catalog(schwarz_core::schwarzian::CatalogId::Strip);
    g.bench_function("float_strip_160", |b| {
        b.iter(|| higher_schwarzian::<Complex64>(&strip, 2, 1, black_box(160)).unwrap())
    });
    g.finish();
}

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("norms");
    let params = TestFamilyParams::new(0.999, 1.5, 0, 0.0).unwrap();
    g.bench_function("test_family_r0.999", |b| b.iter(|| test_family_norm_sq(black_box(&params), 1e-12).unwrap()));
    g.bench_function("test_family_quotient", |b| {
        b.iter(|| test_family_quotient(1, 1, 0.0, 1.05, black_box(0.9999)).unwrap())
    });
    g.sample_size(10);
    g.bench_function("koebe_growth_2_2", |b| {
        b.iter(|| koebe_growth_estimate(2, 2, black_box(&GridSpec::default())).unwrap())
    });
    g.finish();
}

fn rayleigh(c: &mut Criterion) {
    let mut g = c.benchmark_group("rayleigh");
    g.sample_size(10);
    let problem = MultiplierProblem::koebe(1, 1, &int(0)).unwrap();
    for n in [250, 1000] {
        g.bench_with_input(BenchmarkId::new("koebe_1_1", n), &n, |b, &n| {
            b.iter(|| certified_lower_bound(&problem, 0.99, n, 2 * n, &PowerIteration::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, kernel, norms, rayleigh);
criterion_main!(benches);

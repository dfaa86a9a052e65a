use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use trajent::generators::{complete_graph, cycle};
use trajent::hitting::fundamental_matrix;
use trajent::linalg::symmetric_eigenvalues;
use trajent::mc::{estimate, McConfig};
use trajent::{build_report, stationary_distribution, DEFAULT_CHECK_TOL};
use trajent_bench::{dense_chain, reversible_chain, SIZES};

fn fundamental(c: &mut Criterion) {
    let mut g = c.benchmark_group("stationary_and_fundamental");
    for n in SIZES {
        let p = dense_chain(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| {
                let pi = stationary_distribution(p).unwrap();
                black_box(fundamental_matrix(p, &pi).unwrap())
            })
        });
    }
    g.finish();
}

fn report(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_report");
    g.sample_size(20);
    for n in [10, 50] {
        let p = reversible_chain(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| black_box(build_report(p, DEFAULT_CHECK_TOL).unwrap()))
        });
    }
    g.finish();
}

fn jacobi(c: &mut Criterion) {
    let mut g = c.benchmark_group("jacobi");
    for n in SIZES {
        let m = cycle(n).unwrap();
        let s = m.as_dense().clone();
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| black_box(symmetric_eigenvalues(s)))
        });
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    let p = complete_graph(4).unwrap();
    for workers in [1, 4] {
        let cfg = McConfig {
            workers,
            ..McConfig::new(100_000, 1)
        };
        g.bench_with_input(BenchmarkId::new("complete4_1e5", workers), &cfg, |b, cfg| {
            b.iter(|| black_box(estimate(&p, 0, 1, cfg).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, fundamental, report, jacobi, monte_carlo);
criterion_main!(benches);

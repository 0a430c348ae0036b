use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fga_bench::{context, random_matrix, random_series};
use fga_core::lattice::{hnf, snf};

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("series");
    for trunc in [6, 10] {
        let a = random_series(3, trunc, 1);
        let b = random_series(3, trunc, 2);
        g.bench_with_input(BenchmarkId::new("mul", trunc), &trunc, |bench, _| bench.iter(|| a.mul(black_box(&b))));
        let f = random_series(2, trunc, 3);
        let args = [random_series(2, trunc, 4), random_series(2, trunc, 5)];
        g.bench_with_input(BenchmarkId::new("compose", trunc), &trunc, |bench, _| {
            bench.iter(|| f.compose(black_box(&args)))
        });
    }
    g.finish();
}

fn theta(c: &mut Criterion) {
    let mut g = c.benchmark_group("theta");
    g.sample_size(10);
    for (rs, fgl) in [("B3", "multiplicative:a=1"), ("D4", "lorentz:beta=1")] {
        g.bench_function(format!("{rs}/{fgl}"), |bench| {
            bench.iter(|| {
                let ctx = context(rs, fgl, 8);
                black_box(ctx.theta(2).expect("theta"))
            })
        });
    }
    g.finish();
}

fn normal_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("normal_forms");
    for n in [10, 20, 30] {
        let m = random_matrix(n, n, 50, n as u64);
        g.bench_with_input(BenchmarkId::new("hnf", n), &n, |bench, &n| bench.iter(|| hnf(black_box(&m), n)));
        g.bench_with_input(BenchmarkId::new("snf", n), &n, |bench, &n| bench.iter(|| snf(black_box(&m), n)));
    }
    g.finish();
}

criterion_group!(benches, series, theta, normal_forms);
criterion_main!(benches);

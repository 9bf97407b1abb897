use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use g2ricci::numgeom::{run_kahler, run_theorem1, solve_liouville, Stencil};
use g2ricci_bench::kahler_config;
use std::hint::black_box;

fn liouville(c: &mut Criterion) {
    let mut group = c.benchmark_group("liouville");
    for n in [100, 200, 400] {
        for (name, stencil) in [("central", Stencil::Central), ("numerov", Stencil::Numerov)] {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| {
                    solve_liouville(black_box(0.3), (1.0, 2.0), (0.0, 0.0), n, stencil).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn geometry(c: &mut Criterion) {
    let cfg = kahler_config();
    let mut group = c.benchmark_group("geometry");
    group.sample_size(10);
    group.bench_function("kahler", |b| {
        b.iter(|| run_kahler(black_box(&cfg)).unwrap())
    });
    group.bench_function("bundle", |b| {
        b.iter(|| run_theorem1(black_box(&cfg)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, liouville, geometry);
criterion_main!(benches);

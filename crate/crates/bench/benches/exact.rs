use criterion::{criterion_group, criterion_main, Criterion};
use g2ricci::classifier::{det_e2, EigenTriple};
use g2ricci::{pipeline, Classifier, CliffordRep, G2Structure, LieAlgebraData};
use g2ricci_bench::{generic_three_form, mu, r4_su2};
use std::hint::black_box;

fn spin7(c: &mut Criterion) {
    let rep = CliffordRep::build().unwrap();
    let omega = G2Structure::standard().omega.clone();
    c.bench_function("spectrum of ω", |b| {
        b.iter(|| rep.spectrum(black_box(&omega)).unwrap())
    });
}

fn g2(c: &mut Criterion) {
    let g2 = G2Structure::standard();
    let f = generic_three_form();
    c.bench_function("project3", |b| {
        b.iter(|| g2.project3(black_box(&f)).unwrap())
    });
}

fn classifier(c: &mut Criterion) {
    let cl = Classifier::new();
    let mu = mu();
    let m = EigenTriple::from_roots([true, true, false], &mu);
    let mut group = c.benchmark_group("classifier");
    group.sample_size(20);
    group.bench_function("solve_family", |b| {
        b.iter(|| cl.solve_family(black_box(&m), &mu))
    });
    group.bench_function("det_e2", |b| {
        b.iter(|| det_e2(black_box(&mu), &mu).unwrap())
    });
    group.finish();
}

fn group_pipeline(c: &mut Criterion) {
    let g = r4_su2();
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(20);
    group.bench_function("r4_su2", |b| {
        b.iter(|| pipeline::run(black_box(&g), &LieAlgebraData::R4_SU2_PLACEMENT).unwrap())
    });
    group.finish();
}

criterion_group!(benches, spin7, g2, classifier, group_pipeline);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use porder::{build_weyl, RootSystemSpec};
use porder_bench::{cyclic3, cyclic_sra};
use std::hint::black_box;

fn groebner(c: &mut Criterion) {
    c.bench_function("groebner cyclic3", |b| {
        b.iter(|| black_box(cyclic3().canonical_strings().unwrap()));
    });
}

fn pbw(c: &mut Criterion) {
    c.bench_function("pbw z4 degree 6", |b| {
        b.iter(|| black_box(cyclic_sra(4).pbw_dimension_check(6)));
    });
    c.bench_function("center presentation z2", |b| {
        b.iter(|| black_box(cyclic_sra(2).center_presentation(2).unwrap().relation_weight));
    });
}

fn weyl(c: &mut Criterion) {
    let b3 = RootSystemSpec::parse("B3").unwrap();
    c.bench_function("weyl census B3", |b| {
        b.iter(|| black_box(build_weyl(&b3, 1152).unwrap().compare_census().agree));
    });
}

criterion_group!(benches, groebner, pbw, weyl);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use kgring_bench::{extension_over_six, nine_piece_module, standard_module};
use kgring_core::divisible::{full_decompose, reconstruct};
use kgring_core::module::{ext1, free_module};
use kgring_core::ring::RewriteSystem;
use kgring_core::ring::{build_presentation, verify_derived_relations};
use kgring_core::splitting::split_extension;
use kgring_core::{is_exact, Localization};
use std::hint::black_box;

fn ring(c: &mut Criterion) {
    for p in [2u64, 5] {
        let pres = build_presentation(p).unwrap();
        c.bench_function(&format!("complete p={p}"), |b| {
            b.iter(|| RewriteSystem::complete(black_box(&pres)).unwrap())
        });
    }
    c.bench_function("derived relations p=7", |b| {
        b.iter(|| verify_derived_relations(black_box(7)).unwrap())
    });
}

fn modules(c: &mut Criterion) {
    let m = standard_module(5);
    c.bench_function("exactness standard p=5", |b| {
        b.iter(|| is_exact(black_box(&m)).unwrap())
    });
    let f = free_module(&[2], Localization::integers(), &[1]).unwrap().module;
    let q = f
        .quotient(&f.identity_matrix().scale(&kgring_core::intlinalg::rat(2)))
        .unwrap()
        .module;
    c.bench_function("ext1 F/2F p=2", |b| {
        b.iter(|| ext1(black_box(&q), black_box(&q)).unwrap())
    });
}

fn splitting(c: &mut Criterion) {
    let sigma = extension_over_six(7);
    let mut g = c.benchmark_group("splitting");
    g.sample_size(10);
    g.bench_function("split over 6", |b| {
        b.iter(|| split_extension(black_box(&sigma)).unwrap())
    });
    g.finish();
}

fn decomposition(c: &mut Criterion) {
    let m = nine_piece_module();
    let mut g = c.benchmark_group("decomposition");
    g.sample_size(10);
    g.bench_function("nine pieces", |b| {
        b.iter(|| full_decompose(black_box(&m), &[0, 1]).unwrap())
    });
    let d = full_decompose(&m, &[0, 1]).unwrap();
    g.bench_function("reconstruct nine pieces", |b| {
        b.iter(|| reconstruct(black_box(&d)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, ring, modules, splitting, decomposition);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orbitlab::hf::{orbit_hf, Action};
use orbitlab::lemmas::{build_an, stab_bound_report, BoundParams};
use orbitlab::{coarsest_supporting_partition, encode_ordered_partition, SymEngine};
use orbitlab_bench::{lex_blocks, random_blocks, sparse_set};

fn stabilizer(c: &mut Criterion) {
    let engine = SymEngine::default();
    let mut g = c.benchmark_group("stabilizer");
    g.sample_size(10);
    for n in [6, 7, 8] {
        let p = random_blocks(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| engine.stabilizer_order_ordered_partition(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn support(c: &mut Criterion) {
    let mut g = c.benchmark_group("coarsest_support");
    for n in [8, 12, 16] {
        let set = sparse_set(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &set, |b, s| {
            b.iter(|| coarsest_supporting_partition(black_box(s)).unwrap())
        });
    }
    g.finish();
}

fn constructions(c: &mut Criterion) {
    let engine = SymEngine::default();
    let set = sparse_set(12);
    c.bench_function("subset_construction/12", |b| b.iter(|| build_an(black_box(&set)).unwrap()));
    let p = lex_blocks(6);
    c.bench_function("bound_report/6", |b| {
        b.iter(|| stab_bound_report(&engine, black_box(&p), BoundParams::default()).unwrap())
    });
    let x = encode_ordered_partition(&random_blocks(5)).unwrap();
    c.bench_function("encoding_orbit/5", |b| {
        b.iter(|| orbit_hf(&engine, black_box(&x), 5, Action::Positions).unwrap())
    });
}

criterion_group!(benches, stabilizer, support, constructions);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use pachner::kernel::{fixtures, Skeleton};
use pachner::moves::{apply, enumerate_moves, MoveKindSet};
use pachner::search::{connect, scramble, SearchConfig, Strategy};
use pachner::sig::{decode, encode};
use std::hint::black_box;

fn walk_images() -> Vec<pachner::Triangulation> {
    let base = fixtures::double_tetrahedron();
    [(4usize, 6usize), (8, 8), (12, 10)]
        .iter()
        .map(|&(steps, max)| scramble(&base, steps, max, 7).unwrap())
        .collect()
}

fn bench_kernel(c: &mut Criterion) {
    let tris = walk_images();
    let mut group = c.benchmark_group("kernel");
    for t in &tris {
        group.bench_function(format!("skeleton/{}", t.size()), |b| {
            b.iter(|| Skeleton::compute(black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn bench_signatures(c: &mut Criterion) {
    let tris = walk_images();
    let mut group = c.benchmark_group("sig");
    for t in &tris {
        let sig = encode(t).unwrap();
        group.bench_function(format!("encode/{}", t.size()), |b| {
            b.iter(|| encode(black_box(t)).unwrap())
        });
        group.bench_function(format!("decode/{}", t.size()), |b| {
            b.iter(|| decode(black_box(sig.as_str())).unwrap())
        });
    }
    group.finish();
}

fn bench_moves(c: &mut Criterion) {
    let t = scramble(&fixtures::double_tetrahedron(), 8, 8, 7).unwrap();
    let sk = Skeleton::compute(&t).unwrap();
    let mut group = c.benchmark_group("moves");
    group.bench_function("enumerate_all", |b| {
        b.iter(|| enumerate_moves(black_box(&t), &sk, MoveKindSet::ALL).unwrap())
    });
    let sites = enumerate_moves(&t, &sk, MoveKindSet::ALL).unwrap();
    group.bench_function("apply_each", |b| {
        b.iter_batched(
            || sites.clone(),
            |sites| {
                for site in sites {
                    black_box(apply(&t, &sk, site).unwrap());
                }
            },
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_search(c: &mut Criterion) {
    let base = scramble(&fixtures::projective_space(), 4, 5, 3).unwrap();
    let other = scramble(&base, 6, 7, 21).unwrap();
    // Re-scramble until the partner has the same size as the base.
    let mut partner = other;
    let mut seed = 21;
    while partner.size() != base.size() {
        seed += 1;
        partner = scramble(&base, 6, 7, seed).unwrap();
    }
    let seeds = vec![base, partner];
    let mut group = c.benchmark_group("search");
    group.sample_size(20);
    for strategy in [Strategy::Blind, Strategy::Monotonic, Strategy::SemiMonotonic] {
        group.bench_function(strategy.name(), |b| {
            b.iter(|| {
                let mut cfg = SearchConfig::new(strategy, 4);
                cfg.node_limit = 100_000;
                black_box(connect(black_box(&seeds), &cfg).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_kernel, bench_signatures, bench_moves, bench_search);
criterion_main!(benches);

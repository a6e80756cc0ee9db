use criterion::{criterion_group, criterion_main, Criterion};
use ksforge_core::parity::{enumerate_parents, ParentSet};
use ksforge_core::proof::{exhaustive_noncolorability, split_rank2, state_dependent_proof};
use ksforge_core::rays::RaySystem;
use ksforge_core::transform::enumerate_children;
use ksforge_core::{fixture_data, FixtureName, Frame, Realization};

fn regeneration(c: &mut Criterion) {
    c.bench_function("generate rays and bases", |b| b.iter(RaySystem::generate));
}

fn parents(c: &mut Criterion) {
    let sys = RaySystem::shared();
    let mut group = c.benchmark_group("parents");
    group.sample_size(10);
    group.bench_function("enumerate 11-subsets", |b| {
        b.iter(|| enumerate_parents(sys))
    });
    group.finish();
}

fn children(c: &mut Criterion) {
    let parent = ParentSet::table2();
    c.bench_function("enumerate children of table 2", |b| {
        b.iter(|| enumerate_children(&parent))
    });
}

fn proofs(c: &mut Criterion) {
    let t1 = fixture_data(FixtureName::Table1);
    let split = split_rank2(&t1, (25, 27)).unwrap();
    let realization = Realization::for_frame(Frame::Published);
    c.bench_function("exhaustive table 1", |b| {
        b.iter(|| exhaustive_noncolorability(&t1))
    });
    c.bench_function("state-dependent 33 -> 12", |b| {
        b.iter(|| state_dependent_proof(&split, &realization, 33, 12))
    });
}

criterion_group!(benches, regeneration, parents, children, proofs);
criterion_main!(benches);

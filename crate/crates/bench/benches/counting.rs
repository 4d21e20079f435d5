use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use distgraph_core::distgraph::DistGraph;
use distgraph_core::exactcount::{
    blockprofile_rooted_count, blockprofile_unrooted_count, bruteforce_monomorphisms, PartitionVector,
};
use distgraph_core::sampler::{check_ext, count_copies, sample_gp, ExtMode, RootFilter, SampleSeed};
use distgraph_core::{PatternGraph, RootedNetwork};
use std::hint::black_box;

fn unrooted(c: &mut Criterion) {
    let mut group = c.benchmark_group("blockprofile_unrooted");
    for (name, f) in [("k3", PatternGraph::complete(3)), ("c4", PatternGraph::cycle(4))] {
        for n in [16u32, 24] {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| blockprofile_unrooted_count(black_box(&f), n, true).unwrap())
            });
        }
    }
    group.finish();
}

fn rooted(c: &mut Criterion) {
    let net = RootedNetwork::named("path-extension").unwrap();
    let pv = PartitionVector::from_block_sizes(24, 2, vec![7, 5, 5, 7]).unwrap();
    c.bench_function("blockprofile_rooted/path-extension/24", |b| {
        b.iter(|| blockprofile_rooted_count(black_box(&net), &pv, 24).unwrap())
    });
}

fn brute_force(c: &mut Criterion) {
    let g = DistGraph::build(8).unwrap();
    let f = PatternGraph::complete(3);
    c.bench_function("bruteforce_monomorphisms/k3/8", |b| {
        b.iter(|| bruteforce_monomorphisms(black_box(&f), &g))
    });
}

fn sampling(c: &mut Criterion) {
    let g = DistGraph::build(16).unwrap();
    let k3 = PatternGraph::complete(3);
    let mut group = c.benchmark_group("sample");
    group.bench_function("sparse/16", |b| {
        let mut t = 0;
        b.iter(|| {
            t += 1;
            sample_gp(&g, 1.0 / 4900.0, SampleSeed::new(1, t)).unwrap()
        })
    });
    group.bench_function("count_k3/16", |b| {
        let s = sample_gp(&g, 0.002, SampleSeed::new(1, 0)).unwrap();
        b.iter(|| count_copies(&k3, black_box(&s)).unwrap())
    });
    group.finish();

    let g12 = DistGraph::build(12).unwrap();
    let net = RootedNetwork::named("root-edge").unwrap();
    let s = sample_gp(&g12, 0.03, SampleSeed::new(2, 0)).unwrap();
    c.bench_function("check_ext/root-edge/12", |b| {
        b.iter(|| check_ext(black_box(&s), &net, &RootFilter::default(), ExtMode::Exhaustive).unwrap())
    });
}

criterion_group!(benches, unrooted, rooted, brute_force, sampling);
criterion_main!(benches);

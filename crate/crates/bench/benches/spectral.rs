use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pfnet::fixtures::Fixture;
use pfnet::generate::{random_connected, Weights};
use pfnet::multiplex::{self, MultiplexNetwork};
use pfnet::procedures::{perron_greedy_bipartize, GreedyOptions};
use pfnet::sensitivity::{fiedler_impact_matrix, perron_impact_matrix};
use pfnet::Solver;

fn sparse_graph(n: usize) -> pfnet::Graph {
    random_connected(n, n / 2, Weights::Uniform(0.5, 2.0), n as u64)
}

fn perron_and_fiedler(c: &mut Criterion) {
    let dense = Solver::default();
    let lanczos = Solver::iterative();
    let mut group = c.benchmark_group("eigenpairs");
    group.sample_size(10);
    for n in [100, 400, 1000] {
        let g = sparse_graph(n);
        group.bench_with_input(BenchmarkId::new("perron/dense", n), &g, |b, g| {
            b.iter(|| dense.perron_pair(black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("perron/lanczos", n), &g, |b, g| {
            b.iter(|| lanczos.perron_pair(black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fiedler/dense", n), &g, |b, g| {
            b.iter(|| dense.fiedler_candidate(black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fiedler/lanczos", n), &g, |b, g| {
            b.iter(|| lanczos.fiedler_candidate(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn impact_matrices(c: &mut Criterion) {
    let s = Solver::default();
    let g = sparse_graph(1000);
    let p = s.perron_pair(&g).unwrap();
    let f = s.fiedler_candidate(&g).unwrap();
    c.bench_function("impact/perron/1000", |b| {
        b.iter(|| perron_impact_matrix(black_box(&g), &p.pair).unwrap())
    });
    c.bench_function("impact/fiedler/1000", |b| {
        b.iter(|| fiedler_impact_matrix(black_box(&g), &f.pair).unwrap())
    });
}

fn greedy(c: &mut Criterion) {
    let s = Solver::default();
    let mut group = c.benchmark_group("greedy");
    group.sample_size(10);
    let example = Fixture::Example1.graph();
    group.bench_function("perron/example1", |b| {
        b.iter(|| perron_greedy_bipartize(&s, black_box(&example), true, &GreedyOptions::default()).unwrap())
    });
    let g = random_connected(60, 20, Weights::Unit, 3);
    group.bench_function("perron/60", |b| {
        b.iter(|| perron_greedy_bipartize(&s, black_box(&g), true, &GreedyOptions::default()).unwrap())
    });
    group.finish();
}

fn supra(c: &mut Criterion) {
    let s = Solver::default();
    let layers: Vec<_> = (0..4).map(|h| random_connected(100, 50, Weights::Unit, h)).collect();
    let mx = MultiplexNetwork::new(layers, 0.1).unwrap();
    let mut group = c.benchmark_group("multiplex");
    group.sample_size(10);
    group.bench_function("eigentensor/100x4", |b| {
        b.iter(|| multiplex::eigentensor(&s, black_box(&mx)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, perron_and_fiedler, impact_matrices, greedy, supra);
criterion_main!(benches);

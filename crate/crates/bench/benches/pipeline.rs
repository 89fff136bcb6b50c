use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cubic_sudoku::chain::{build_q, mixing_time, ChainParams};
use cubic_sudoku::verify::{count_extensions, COUNT_GUARD};
use cubic_sudoku::{full_pipeline, generate_graph, PipelineConfig};
use std::hint::black_box;

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_pipeline");
    group.sample_size(10);
    for n in [10_000usize, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| full_pipeline(black_box(&PipelineConfig::new(n, 1))).unwrap())
        });
    }
    group.finish();
}

fn generation(c: &mut Criterion) {
    c.bench_function("generate_graph_1e5", |b| {
        b.iter(|| generate_graph(black_box(100_000), 7).unwrap())
    });
}

fn chain(c: &mut Criterion) {
    let q = build_q(&ChainParams::balanced(0.3).unwrap());
    c.bench_function("mixing_time_q0.3", |b| b.iter(|| mixing_time(black_box(&q), 1e-3, 10_000)));
}

fn counting(c: &mut Criterion) {
    let g = generate_graph(30, 2).unwrap().to_adjacency();
    let mut partial = vec![0u8; 30];
    partial[0] = 1;
    partial[1] = 2;
    c.bench_function("count_extensions_n30", |b| {
        b.iter(|| count_extensions(&g, black_box(&partial), 3, None, COUNT_GUARD).unwrap())
    });
}

criterion_group!(benches, pipeline, generation, chain, counting);
criterion_main!(benches);

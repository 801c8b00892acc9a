use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use xling_core::lsi::{LsiModel, SvdOptions};
use xling_core::retrieval::{retrieve_cl_lsi, CandidateSet, retrieve};

fn bench(c: &mut Criterion) {
    let corpus = xling_bench::corpus(600);
    let pipeline = xling_bench::pipeline();
    let (src, tgt) = xling_bench::processed(600);
    let model = LsiModel::train_crosslingual(&src[..500], &tgt[..500], 100, &SvdOptions::default()).unwrap();
    let queries = &corpus.source_docs()[500..];
    let candidates = &corpus.target_docs()[500..];
    c.bench_function("cl_lsi_100x100_k100", |b| {
        b.iter(|| retrieve_cl_lsi(black_box(queries), black_box(candidates), &model, &pipeline, 10).unwrap())
    });

    let set: CandidateSet = (0..10_000)
        .map(|i| (format!("c{i:05}"), (0..300).map(|j| ((i * 31 + j * 17) % 97) as f64).collect()))
        .collect();
    let query: Vec<f64> = (0..300).map(|j| (j % 13) as f64).collect();
    c.bench_function("top10_of_10000_dim300", |b| b.iter(|| retrieve("q", black_box(&query), &set, 10).unwrap()));
}

criterion_group!(benches, bench);
criterion_main!(benches);

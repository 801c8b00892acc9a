use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use xling_core::bidict::Side;
use xling_core::vsm::{TermDocMatrix, Vocabulary};

fn bench(c: &mut Criterion) {
    let corpus = xling_bench::corpus(1000);
    let pipeline = xling_bench::pipeline();
    let texts: Vec<&str> = corpus.source_docs().iter().map(|d| d.text.as_str()).collect();
    c.bench_function("pipeline_1000_docs", |b| {
        b.iter(|| pipeline.process_corpus(black_box(&texts), Side::Source))
    });
    let docs = pipeline.process_corpus(&texts, Side::Source);
    let vocab = Vocabulary::build(&docs).unwrap();
    c.bench_function("tfidf_matrix_1000_docs", |b| {
        b.iter(|| TermDocMatrix::build(black_box(&docs), &vocab).unwrap())
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use xling_core::lsi::{build_cross_matrix, truncated_svd, SvdOptions};

fn bench(c: &mut Criterion) {
    let (src, tgt) = xling_bench::processed(500);
    let (_, matrix) = build_cross_matrix(&src, &tgt).unwrap();
    let mut group = c.benchmark_group("truncated_svd_500_couples");
    group.sample_size(10);
    for k in [50, 100] {
        group.bench_function(format!("k{k}"), |b| {
            b.iter(|| truncated_svd(black_box(matrix.matrix()), k, &SvdOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);

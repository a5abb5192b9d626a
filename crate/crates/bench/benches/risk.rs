use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ranksvm_core::data::{SyntheticConfig, SyntheticKind};
use ranksvm_core::pairloss::evaluate;
use ranksvm_core::scaling::probe_weights;
use ranksvm_core::Backend;
use std::hint::black_box;

const N: usize = 1000;
const SPARSITY: f64 = 0.02;

fn loss_and_subgradient(c: &mut Criterion) {
    let mut group = c.benchmark_group("loss_and_subgradient");
    group.sample_size(20);
    let w = probe_weights(N, 0);
    for m in [1usize << 10, 1 << 12, 1 << 14] {
        let data = SyntheticConfig::new(SyntheticKind::SparseSimilarity, m, N, SPARSITY, 0)
            .generate()
            .unwrap();
        let pairs = data.validate().unwrap().pair_count;
        group.throughput(Throughput::Elements(m as u64));
        for backend in [Backend::Tree, Backend::Brute] {
            // The quadratic backend is only timed on the smaller sizes.
            if backend == Backend::Brute && m > 1 << 12 {
                continue;
            }
            group.bench_with_input(
                BenchmarkId::new(backend.to_string(), m),
                &data,
                |b, data| {
                    b.iter(|| evaluate(backend, data.x(), data.y(), black_box(&w), pairs).unwrap())
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, loss_and_subgradient);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use ranksvm_core::data::{SyntheticConfig, SyntheticKind};
use ranksvm_core::{train, Backend, TrainConfig};

fn full_training(c: &mut Criterion) {
    let data = SyntheticConfig::new(SyntheticKind::DenseRegression, 2000, 10, 1.0, 0)
        .with_noise(0.5)
        .generate()
        .unwrap();
    let mut group = c.benchmark_group("train");
    group.sample_size(10);
    for lambda in [1e-1, 1e-3] {
        let cfg = TrainConfig {
            lambda,
            backend: Backend::Tree,
            ..Default::default()
        };
        group.bench_function(format!("dense_m2000_lambda{lambda}"), |b| {
            b.iter(|| train(&data, cfg, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, full_training);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use posearch_bench::{skewed_model, spec, uniform_state};
use posearch_core::{
    run_baseline, run_search, schedule_for, search_rng, ModelledState, StageOracle,
};

fn bench_walsh_hadamard(c: &mut Criterion) {
    let mut group = c.benchmark_group("walsh_hadamard");
    for n in [10usize, 14, 18] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut sv = uniform_state(n);
            b.iter(|| {
                sv.apply_walsh_hadamard().unwrap();
                black_box(sv.probability_of(0).unwrap())
            });
        });
    }
    group.finish();
}

fn bench_oracle_application(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_apply");
    for n in [8usize, 14] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let spec = spec(n);
            let mut oracle = StageOracle::new(&spec, n / 2, std::f64::consts::PI).unwrap();
            let mut sv = uniform_state(n);
            b.iter(|| oracle.apply(black_box(&mut sv)).unwrap());
        });
    }
    group.finish();
}

fn bench_model_preparation(c: &mut Criterion) {
    let mut group = c.benchmark_group("model_prepare");
    for n in [8usize, 14] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let model = skewed_model(n);
            b.iter(|| black_box(model.prepare().unwrap()));
        });
    }
    group.finish();
}

fn bench_shot_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_bits_1000");
    for n in [8usize, 14] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let sv = uniform_state(n);
            let mut rng = search_rng(1, 0);
            b.iter(|| black_box(sv.sample_bits(1000, &mut rng).unwrap()));
        });
    }
    group.finish();
}

fn bench_full_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_search_1000_shots");
    group.sample_size(20);
    for n in [8usize, 12, 14] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let spec = spec(n);
            b.iter(|| black_box(run_search(&spec, 1000, search_rng(2, 0)).unwrap()));
        });
    }
    group.finish();
}

fn bench_baseline_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_baseline");
    group.sample_size(10);
    for n in [8usize, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let spec = spec(n);
            b.iter(|| black_box(run_baseline(&spec).unwrap()));
        });
    }
    group.finish();
}

fn bench_weight_schedule(c: &mut Criterion) {
    c.bench_function("schedule_and_estimate", |b| {
        let model = ModelledState::uniform(14);
        b.iter(|| {
            let lambda = model.estimate_lambda(black_box(1)).unwrap();
            black_box(schedule_for(lambda).unwrap())
        });
    });
}

criterion_group!(
    benches,
    bench_walsh_hadamard,
    bench_oracle_application,
    bench_model_preparation,
    bench_shot_sampling,
    bench_full_search,
    bench_baseline_search,
    bench_weight_schedule
);
criterion_main!(benches);

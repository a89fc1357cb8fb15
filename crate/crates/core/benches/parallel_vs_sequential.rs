//! Throughput comparison of the rayon-chunked replication path against the
//! sequential reference path on the estimator inner loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use semicross::distributions::JumpLaw;
use semicross::estimators::{ak_estimate, semiparam_is_estimate};
use semicross::exec::{run_replications, run_replications_seq, stream_rng, StreamDomain};
use semicross::gibbs::run_fixed_chain;
use semicross::mixture::ProductIsDensity;
use semicross::model::FixedSumModel;

fn bench_raw_replications(c: &mut Criterion) {
    let mut group = c.benchmark_group("replication-runner");
    let work = |i: u64| {
        let mut rng = stream_rng(11, StreamDomain::Replication, i);
        let mut acc = 0.0;
        for _ in 0..32 {
            acc += rand::Rng::random::<f64>(&mut rng).sqrt();
        }
        acc
    };
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(run_replications(black_box(200_000), work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(run_replications_seq(black_box(200_000), work)))
    });
    group.finish();
}

fn bench_semiparametric_sampling(c: &mut Criterion) {
    let model = FixedSumModel::new(JumpLaw::weibull(0.5).unwrap(), 10, 100.0).unwrap();
    let chain = run_fixed_chain(&model, 1000, 100, 3);
    let g = ProductIsDensity::build(&chain).unwrap();
    let mut group = c.benchmark_group("semiparam-is-m20k");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(semiparam_is_estimate(&model, &g, 20_000, 3)))
    });
    group.finish();
}

fn bench_ak(c: &mut Criterion) {
    let model = FixedSumModel::new(JumpLaw::pareto(1.0).unwrap(), 10, 10_010.0).unwrap();
    let mut group = c.benchmark_group("ak-m100k");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(ak_estimate(&model, 100_000, 5)))
    });
    group.finish();
}

criterion_group!(benches, bench_raw_replications, bench_semiparametric_sampling, bench_ak);
criterion_main!(benches);

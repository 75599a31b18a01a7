//! End-to-end constructions: the NEG counterexample, the MSS profile and a
//! radial shot.

use criterion::{criterion_group, criterion_main, Criterion};

use shrinker_core::construct::{build_counterexample, build_mss_counterexample, CounterexampleConfig, MssConfig};
use shrinker_core::radial::{shoot_radial, RadialOptions};
use shrinker_core::TauParams;

fn bench_counterexample(c: &mut Criterion) {
    let tp = TauParams::from_cot(-2.0).unwrap();
    let mut cfg = CounterexampleConfig::new(tp, 2, 0.0, 1.0);
    cfg.axis_samples = 201;
    cfg.random_samples = 200;
    let mut group = c.benchmark_group("constructions");
    group.sample_size(10);
    group.bench_function("counterexample/n=2", |b| b.iter(|| build_counterexample(&cfg).unwrap()));
    let mss = MssConfig::new(1.0, 0.0);
    group.bench_function("mss", |b| b.iter(|| build_mss_counterexample(&mss).unwrap()));
    group.finish();
}

fn bench_radial(c: &mut Criterion) {
    let tp = TauParams::special_lagrangian();
    let opts = RadialOptions::default();
    c.bench_function("shoot_radial/SLAG n=2 r=10", |b| {
        b.iter(|| shoot_radial(&tp, 2, -std::f64::consts::FRAC_PI_2 + 0.1, 10.0, &opts).unwrap())
    });
}

criterion_group!(benches, bench_counterexample, bench_radial);
criterion_main!(benches);

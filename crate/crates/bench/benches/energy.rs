use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sensekit_core::beacon::estimate_distance;
use sensekit_core::energy::{predict_lifetime, simulate_discharge, EnergyProfile, SensorMode};

fn energy(c: &mut Criterion) {
    let profile = EnergyProfile::iphone_5s();
    let modes = [
        SensorMode::new("ibeacon-scan"),
        SensorMode::new("ibeacon-broadcast"),
    ];
    c.bench_function("predict_lifetime", |b| {
        b.iter(|| predict_lifetime(black_box(&profile), black_box(&modes)))
    });
    c.bench_function("simulate_discharge_1min", |b| {
        b.iter(|| simulate_discharge(black_box(&profile), black_box(&modes), 1.0))
    });
    c.bench_function("estimate_distance", |b| {
        b.iter(|| estimate_distance(black_box(-79.0), black_box(-59.0), black_box(2.0)))
    });
}

criterion_group!(benches, energy);
criterion_main!(benches);

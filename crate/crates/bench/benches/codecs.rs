use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sensekit_core::beacon::*;
use sensekit_core::config::SensorConfig;
use sensekit_core::drivers::{run_driver, SyntheticDriver};
use sensekit_core::serialization::{csv_row, from_json, parse_csv_row, to_json};
use sensekit_core::SensorType;

fn beacons(c: &mut Criterion) {
    let ib = IBeaconFrame {
        uuid: "f7826da6-4fa2-4e98-8024-bc5b71e0893e".parse().unwrap(),
        major: 1,
        minor: 2,
        measured_power: -59,
    };
    let ib_bytes = encode_ibeacon(&ib);
    c.bench_function("ibeacon_encode", |b| {
        b.iter(|| encode_ibeacon(black_box(&ib)))
    });
    c.bench_function("ibeacon_decode", |b| {
        b.iter(|| decode_ibeacon(black_box(&ib_bytes)))
    });

    let url = EddystoneFrame::Url(EddystoneUrl {
        tx_power_at_0m: -20,
        url: "https://www.sensingkit.org/".into(),
    });
    let url_bytes = encode_eddystone(&url).unwrap();
    c.bench_function("eddystone_url_encode", |b| {
        b.iter(|| encode_eddystone(black_box(&url)))
    });
    c.bench_function("eddystone_url_decode", |b| {
        b.iter(|| decode_eddystone(black_box(&url_bytes)))
    });
}

fn rows(c: &mut Criterion) {
    let sensor = SensorType::Accelerometer;
    let mut d = SyntheticDriver::new(sensor, &SensorConfig::default_for(sensor), 1).unwrap();
    let sample = run_driver(&mut d, 0, 1_000_000_000).remove(0);
    let row = csv_row(&sample).unwrap();
    let line = to_json(&sample).unwrap();

    c.bench_function("csv_encode", |b| b.iter(|| csv_row(black_box(&sample))));
    c.bench_function("csv_parse", |b| {
        b.iter(|| parse_csv_row(sensor, black_box(&row)))
    });
    c.bench_function("json_encode", |b| b.iter(|| to_json(black_box(&sample))));
    c.bench_function("json_parse", |b| b.iter(|| from_json(black_box(&line))));
}

criterion_group!(benches, beacons, rows);
criterion_main!(benches);

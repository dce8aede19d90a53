use proptest::prelude::*;

use sensekit_core::beacon::*;
use sensekit_core::clock::{SimulatedTimeSource, NANOS_PER_SECOND};
use sensekit_core::config::SensorConfig;
use sensekit_core::drivers::{run_driver, SyntheticDriver};
use sensekit_core::payload::*;
use sensekit_core::serialization::{csv_row, from_json, parse_csv_row, to_json};
use sensekit_core::{PlatformProfile, SensorManager, SensorSample, SensorType};
use uuid::Uuid;

fn sensor() -> impl Strategy<Value = SensorType> {
    (0..SensorType::ALL.len()).prop_map(|i| SensorType::ALL[i])
}

/// Decimals with at most six fractional digits survive CSV unchanged.
fn q6(range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = f64> {
    range.prop_map(|k| k as f64 / 1e6)
}

fn vector() -> impl Strategy<Value = Vector3> {
    (
        q6(-20_000_000..=20_000_000),
        q6(-20_000_000..=20_000_000),
        q6(-20_000_000..=20_000_000),
    )
        .prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1_000_000i64..=1_000_000)
        .prop_filter("non-zero", |a| a.iter().any(|&v| v.abs() > 1000))
        .prop_map(|a| {
            let q = Quaternion {
                x: a[0] as f64,
                y: a[1] as f64,
                z: a[2] as f64,
                w: a[3] as f64,
            }
            .normalized();
            let r = |v: f64| (v * 1e6).round() / 1e6;
            Quaternion {
                x: r(q.x),
                y: r(q.y),
                z: r(q.z),
                w: r(q.w),
            }
        })
}

fn url() -> impl Strategy<Value = String> {
    let scheme = prop::sample::select(vec!["http://www.", "https://www.", "http://", "https://"]);
    (scheme, "[!-~]{0,16}")
        .prop_map(|(s, body)| format!("{s}{body}"))
        .prop_filter("fits in a frame", |u| encode_url(u).is_ok())
}

fn eddystone_frame() -> impl Strategy<Value = EddystoneFrame> {
    prop_oneof![
        (any::<i8>(), any::<[u8; 10]>(), any::<[u8; 6]>()).prop_map(|(tx, namespace, instance)| {
            EddystoneFrame::Uid(EddystoneUid {
                tx_power_at_0m: tx,
                namespace,
                instance,
            })
        }),
        (any::<i8>(), url()).prop_map(|(tx, url)| EddystoneFrame::Url(EddystoneUrl {
            tx_power_at_0m: tx,
            url
        })),
        (any::<u16>(), any::<i16>(), any::<u32>(), any::<u32>()).prop_map(|(mv, t, a, u)| {
            EddystoneFrame::Tlm(EddystoneTlm {
                battery_millivolts: mv,
                temperature: Fixed88(t),
                adv_count: a,
                uptime_deciseconds: u,
            })
        }),
    ]
}

fn ibeacon_frame() -> impl Strategy<Value = IBeaconFrame> {
    (any::<[u8; 16]>(), any::<u16>(), any::<u16>(), any::<i8>()).prop_map(|(u, major, minor, p)| {
        IBeaconFrame {
            uuid: Uuid::from_bytes(u),
            major,
            minor,
            measured_power: p,
        }
    })
}

fn payload(sensor: SensorType) -> BoxedStrategy<Payload> {
    use SensorType as S;
    match sensor {
        S::Accelerometer => vector().prop_map(Payload::Accelerometer).boxed(),
        S::Gravity => vector().prop_map(Payload::Gravity).boxed(),
        S::LinearAcceleration => vector().prop_map(Payload::LinearAcceleration).boxed(),
        S::Gyroscope => vector().prop_map(Payload::Gyroscope).boxed(),
        S::Magnetometer => vector().prop_map(Payload::Magnetometer).boxed(),
        S::Rotation => quaternion().prop_map(Payload::Rotation).boxed(),
        S::Pedometer => (any::<u32>(), q6(0..=1_000_000_000_000))
            .prop_map(|(s, d)| {
                Payload::Pedometer(PedometerData {
                    step_count: u64::from(s),
                    distance_meters: d,
                })
            })
            .boxed(),
        S::Altimeter => (q6(-500_000_000..=9_000_000_000), q6(1..=120_000_000))
            .prop_map(|(a, p)| {
                Payload::Altimeter(AltimeterData {
                    relative_altitude_meters: a,
                    pressure_kpa: p,
                })
            })
            .boxed(),
        S::Humidity => q6(0..=100_000_000)
            .prop_map(|percent| Payload::Humidity(HumidityData { percent }))
            .boxed(),
        S::Light => q6(0..=100_000_000_000)
            .prop_map(|lux| Payload::Light(LightData { lux }))
            .boxed(),
        S::AmbientTemperature => q6(-50_000_000..=60_000_000)
            .prop_map(|celsius| Payload::AmbientTemperature(TemperatureData { celsius }))
            .boxed(),
        S::Location => (
            q6(-90_000_000..=90_000_000),
            q6(-180_000_000..=180_000_000),
            q6(-500_000_000..=9_000_000_000),
            q6(1..=1_000_000_000),
        )
            .prop_map(|(lat, lon, alt, acc)| {
                Payload::Location(LocationData {
                    latitude: lat,
                    longitude: lon,
                    altitude_meters: alt,
                    horizontal_accuracy_meters: acc,
                })
            })
            .boxed(),
        S::MotionActivity => (
            prop::sample::select(Activity::ALL.to_vec()),
            prop::sample::select(Confidence::ALL.to_vec()),
        )
            .prop_map(|(activity, confidence)| {
                Payload::MotionActivity(MotionActivityData {
                    activity,
                    confidence,
                })
            })
            .boxed(),
        S::Battery => (0u32..=100, prop::sample::select(BatteryState::ALL.to_vec()))
            .prop_map(|(p, state)| {
                Payload::Battery(BatteryData {
                    level: f64::from(p) / 100.0,
                    state,
                })
            })
            .boxed(),
        S::ScreenStatus => prop::sample::select(ScreenState::ALL.to_vec())
            .prop_map(|status| Payload::ScreenStatus(ScreenStatusData { status }))
            .boxed(),
        S::Microphone => (any::<u32>(), q6(0..=1_000_000))
            .prop_map(|(f, rms)| {
                Payload::Microphone(MicrophoneData {
                    frame_index: u64::from(f),
                    rms_amplitude: rms,
                })
            })
            .boxed(),
        S::BluetoothClassic => (any::<[u8; 6]>(), "[ -~]{0,24}", -120i8..=0)
            .prop_map(|(mac, name, rssi)| {
                Payload::BluetoothClassic(BluetoothDevice {
                    device_address: MacAddress(mac),
                    device_name: name,
                    rssi,
                })
            })
            .boxed(),
        S::IBeaconProximity => (ibeacon_frame(), -120i8..=0)
            .prop_map(|(f, rssi)| {
                Payload::IBeaconProximity(BeaconSighting {
                    frame: BeaconFrame::IBeacon(f),
                    rssi,
                    timestamp_nanos: 0,
                })
            })
            .boxed(),
        S::EddystoneProximity => (eddystone_frame(), -120i8..=0)
            .prop_map(|(f, rssi)| {
                Payload::EddystoneProximity(BeaconSighting {
                    frame: BeaconFrame::Eddystone(f),
                    rssi,
                    timestamp_nanos: 0,
                })
            })
            .boxed(),
    }
}

fn sample() -> impl Strategy<Value = SensorSample> {
    (sensor(), any::<u64>()).prop_flat_map(|(s, ts)| {
        payload(s).prop_map(move |p| SensorSample::from_payload(0, p).retimed(ts))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn csv_round_trip(s in sample()) {
        let row = csv_row(&s).unwrap();
        prop_assert_eq!(parse_csv_row(s.sensor_type, &row).unwrap(), s);
    }

    #[test]
    fn json_round_trip(s in sample()) {
        let line = to_json(&s).unwrap();
        prop_assert_eq!(from_json(&line).unwrap(), s);
    }

    #[test]
    fn generated_samples_validate(s in sample()) {
        prop_assert!(s.payload.validate_with(QUANTIZED_NORM_TOLERANCE).is_ok());
    }

    #[test]
    fn ibeacon_round_trip(f in ibeacon_frame()) {
        let bytes = encode_ibeacon(&f);
        prop_assert_eq!(bytes.len(), 27);
        prop_assert_eq!(decode_ibeacon(&bytes).unwrap(), f.clone());
        prop_assert_eq!(decode_advertisement(&bytes).unwrap(), BeaconFrame::IBeacon(f));
    }

    #[test]
    fn eddystone_round_trip(f in eddystone_frame()) {
        let bytes = encode_eddystone(&f).unwrap();
        prop_assert_eq!(decode_eddystone(&bytes).unwrap(), f);
    }

    #[test]
    fn decoders_total(bytes in prop::collection::vec(any::<u8>(), 0..40)) {
        let _ = decode_ibeacon(&bytes);
        let _ = decode_eddystone(&bytes);
        let _ = decode_advertisement(&bytes);
    }

    #[test]
    fn url_encoding_bounded(u in url()) {
        let enc = encode_url(&u).unwrap();
        prop_assert!(enc.len() <= MAX_ENCODED_URL_LEN);
    }

    #[test]
    fn distance_at_reference_is_one(r in -100.0f64..0.0, n in 1.0f64..6.0) {
        prop_assert!((estimate_distance(r, r, n).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weaker_signal_is_farther(a in -120.0f64..0.0, b in -120.0f64..0.0, r in -100.0f64..-30.0, n in 1.0f64..6.0) {
        prop_assume!(a != b);
        let (weak, strong) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(estimate_distance(weak, r, n).unwrap() > estimate_distance(strong, r, n).unwrap());
    }

    #[test]
    fn synthetic_schema_conformance(s in sensor(), seed in any::<u64>()) {
        let cfg = SensorConfig::default_for(s);
        let cfg = if s == SensorType::Microphone { cfg.with_rate(8_192.0) } else { cfg };
        let mut d = SyntheticDriver::new(s, &cfg, seed).unwrap();
        let until = if s.is_event_driven() { 600 } else { 3 } * NANOS_PER_SECOND;
        for sample in run_driver(&mut d, 0, until) {
            prop_assert_eq!(sample.sensor_type, s);
            prop_assert!(sample.payload.validate().is_ok(), "{:?}", sample);
            if let Payload::Rotation(q) = sample.payload {
                prop_assert!((q.norm() - 1.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn synthetic_determinism(s in sensor(), seed in any::<u64>()) {
        let cfg = SensorConfig::default_for(s);
        let run = || {
            let mut d = SyntheticDriver::new(s, &cfg, seed).unwrap();
            run_driver(&mut d, 0, 2 * NANOS_PER_SECOND)
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn sample_count(rate in 1u32..500, seconds in 1u64..20) {
        let cfg = SensorConfig::default_for(SensorType::Gyroscope).with_rate(f64::from(rate));
        let mut d = SyntheticDriver::new(SensorType::Gyroscope, &cfg, 1).unwrap();
        let n = run_driver(&mut d, 0, seconds * NANOS_PER_SECOND).len() as u64;
        // |{k >= 0 : k / rate < T}| = rate * T for whole seconds
        prop_assert_eq!(n, u64::from(rate) * seconds);
    }

    #[test]
    fn clock_immunity(jumps in prop::collection::vec((0u64..10, -7_200i64..7_200), 0..6)) {
        let run = |jumps: &[(u64, i64)]| {
            let time = SimulatedTimeSource::new(1_000, 1_700_000_000 * NANOS_PER_SECOND as i64);
            let mut m = SensorManager::new(PlatformProfile::ios(), Box::new(time.clone()), 3);
            let h = m.register(SensorType::Accelerometer, SensorConfig::default_for(SensorType::Accelerometer)).unwrap();
            let out = std::sync::Arc::new(std::sync::Mutex::new(Vec::new()));
            let o = out.clone();
            m.subscribe(h, move |s| o.lock().unwrap().push(s.timestamp_nanos)).unwrap();
            m.start(h).unwrap();
            for step in 0..10 {
                for &(at, delta) in jumps {
                    if at == step {
                        time.jump_wall_clock(delta * NANOS_PER_SECOND as i64);
                    }
                }
                time.advance(NANOS_PER_SECOND / 2);
                m.poll().unwrap();
            }
            m.stop(h).unwrap();
            let v = out.lock().unwrap().clone();
            v
        };
        prop_assert_eq!(run(&jumps), run(&[]));
    }

    #[test]
    fn merged_delivery_is_ordered(seed in any::<u64>(), picks in prop::collection::btree_set(0usize..19, 1..6)) {
        let time = SimulatedTimeSource::new(0, 0);
        let mut m = SensorManager::new(PlatformProfile::android(), Box::new(time.clone()), seed);
        let log = std::sync::Arc::new(std::sync::Mutex::new(Vec::new()));
        for i in picks {
            let s = SensorType::ALL[i];
            let cfg = SensorConfig::default_for(s);
            let cfg = if s == SensorType::Microphone { cfg.with_rate(8_192.0) } else { cfg };
            let h = m.register(s, cfg).unwrap();
            let l = log.clone();
            m.subscribe(h, move |x| l.lock().unwrap().push(x.timestamp_nanos)).unwrap();
            m.start(h).unwrap();
        }
        for _ in 0..4 {
            time.advance(NANOS_PER_SECOND / 3);
            m.poll().unwrap();
        }
        let log = log.lock().unwrap();
        prop_assert!(log.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn ranging_window_count(seconds in 1u64..30, offset in 0u64..NANOS_PER_SECOND) {
        let mut ranger = Ranger::new(RangingConfig::default(), 0);
        let frame = BeaconFrame::IBeacon(IBeaconFrame { uuid: Uuid::nil(), major: 1, minor: 1, measured_power: -59 });
        let mut windows = Vec::new();
        let total = seconds * NANOS_PER_SECOND;
        let mut t = offset % total;
        while t < total {
            windows.extend(ranger.push(BeaconSighting::new(frame.clone(), -65, t).unwrap()));
            t += 250_000_000;
        }
        windows.extend(ranger.advance_to(total));
        prop_assert_eq!(windows.len() as u64, seconds);
    }
}

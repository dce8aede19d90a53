use sensekit_core::energy::*;
use sensekit_core::{SensorConfig, SensorType};

/// Measured rows: (mode label, hours lasted).
const ROWS: [(&str, f64); 10] = [
    ("idle", 51.27),
    ("accelerometer", 31.51),
    ("gyroscope", 28.15),
    ("magnetometer", 34.45),
    ("device-motion", 21.07),
    ("location-best", 17.42),
    ("ibeacon-broadcast", 46.43),
    ("ibeacon-scan", 25.21),
    ("ibeacon-scan-broadcast", 25.26),
    ("microphone", 35.41),
];

const CAPACITY: f64 = 1560.0;

#[test]
fn single_modes_reproduce_measurements() {
    let p = EnergyProfile::iphone_5s();
    assert_eq!(p.capacity_mah(), CAPACITY);
    for (label, hours) in ROWS {
        let got = predict_lifetime(&p, &[SensorMode::new(label)])
            .unwrap()
            .hours;
        assert!((got - hours).abs() < 1e-9, "{label}: {got}");
    }
}

#[test]
fn additive_combination() {
    let p = EnergyProfile::iphone_5s();
    // capacity / (idle + (scan - idle) + (broadcast - idle)) worked by hand
    let idle = CAPACITY / 51.27;
    let expected = CAPACITY / (CAPACITY / 25.21 + CAPACITY / 46.43 - idle);
    let modes = [
        SensorMode::new("ibeacon-scan"),
        SensorMode::new("ibeacon-broadcast"),
    ];
    let pred = predict_lifetime(&p, &modes).unwrap();
    assert!((pred.hours - expected).abs() < 1e-9);
    assert_eq!(format!("{:.2}", pred.hours), "23.98");
    assert!((pred.hours - 25.26).abs() / 25.26 < 0.10);
    assert!(pred
        .caveats
        .iter()
        .any(|c| matches!(c, Caveat::MeasuredCombination { .. })));
}

#[test]
fn ordering() {
    let p = EnergyProfile::iphone_5s();
    let mut predicted: Vec<(f64, &str)> = ROWS
        .iter()
        .map(|(l, _)| {
            (
                predict_lifetime(&p, &[SensorMode::new(*l)]).unwrap().hours,
                *l,
            )
        })
        .collect();
    predicted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut measured = ROWS.to_vec();
    measured.sort_by(|a, b| a.1.total_cmp(&b.1));
    let a: Vec<&str> = predicted.iter().map(|x| x.1).collect();
    let b: Vec<&str> = measured.iter().map(|x| x.0).collect();
    assert_eq!(a, b);
    assert_eq!(a[0], "location-best");
    assert_eq!(a[9], "idle");
}

#[test]
fn broadcast_is_cheap() {
    let p = EnergyProfile::iphone_5s();
    let b = overhead_draw(&p, &SensorMode::new("ibeacon-broadcast")).unwrap();
    let s = overhead_draw(&p, &SensorMode::new("ibeacon-scan")).unwrap();
    assert!(b / s < 0.15, "{}", b / s);
}

#[test]
fn discharge_reaches_zero_within_one_step() {
    let p = EnergyProfile::iphone_5s();
    for step_minutes in [1.0, 7.5, 30.0, 60.0] {
        for (label, hours) in ROWS {
            let modes = [SensorMode::new(label)];
            let s = simulate_discharge(&p, &modes, step_minutes).unwrap();
            let empty = s.time_to_empty().unwrap();
            assert!(empty >= hours && empty - hours <= step_minutes / 60.0 + 1e-9);
            assert!(s.points().windows(2).all(|w| w[1].level <= w[0].level));
            assert_eq!(s.points()[0].level, 1.0);
        }
    }
}

#[test]
fn fused_outputs_count_as_device_motion() {
    let p = EnergyProfile::iphone_5s();
    let cfgs: Vec<SensorConfig> = [
        SensorType::Gravity,
        SensorType::LinearAcceleration,
        SensorType::Rotation,
    ]
    .into_iter()
    .map(SensorConfig::default_for)
    .collect();
    let modes = modes_for_configs(&cfgs).unwrap();
    assert_eq!(
        modes.into_iter().collect::<Vec<_>>(),
        vec![SensorMode::new("device-motion")]
    );
    let modes = [SensorMode::new("device-motion")];
    assert!((predict_lifetime(&p, &modes).unwrap().hours - 21.07).abs() < 1e-9);
}

#[test]
fn uncalibrated_rate_is_rejected() {
    let cfg = SensorConfig::default_for(SensorType::Accelerometer).with_rate(50.0);
    assert!(matches!(
        modes_for_configs(&[cfg]),
        Err(EnergyError::Uncalibrated { .. })
    ));
}

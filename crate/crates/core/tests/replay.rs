use std::sync::{Arc, Mutex};

use sensekit_core::clock::{SimulatedTimeSource, NANOS_PER_SECOND};
use sensekit_core::drivers::{
    create_replay_driver, create_synthetic_driver, run_driver, DischargeBatteryDriver, TraceFile,
};
use sensekit_core::energy::{simulate_discharge, EnergyProfile, SensorMode};
use sensekit_core::{PlatformProfile, SensorConfig, SensorManager, SensorType};

#[test]
fn replay_through_manager_keeps_payloads_and_gaps() {
    for sensor in [
        SensorType::Location,
        SensorType::EddystoneProximity,
        SensorType::MotionActivity,
    ] {
        let cfg = SensorConfig::default_for(sensor);
        let mut d = create_synthetic_driver(sensor, &cfg, 99).unwrap();
        let recorded = run_driver(d.as_mut(), 0, 300 * NANOS_PER_SECOND);
        assert!(!recorded.is_empty());
        let text = TraceFile::new(sensor, recorded.clone())
            .unwrap()
            .render()
            .unwrap();
        let trace = TraceFile::parse(&text).unwrap();
        // a trace stores payload decimals at CSV precision; re-rendering is stable
        assert_eq!(trace.render().unwrap(), text);
        let recorded = trace.records().to_vec();

        let time = SimulatedTimeSource::new(0, 0);
        let mut m = SensorManager::new(PlatformProfile::android(), Box::new(time.clone()), 0);
        time.advance(123_456_789);
        let h = m
            .register_with_driver(cfg, create_replay_driver(sensor, trace).unwrap())
            .unwrap();
        let out = Arc::new(Mutex::new(Vec::new()));
        let o = out.clone();
        m.subscribe(h, move |s| o.lock().unwrap().push(s.clone()))
            .unwrap();
        m.start(h).unwrap();
        time.advance(400 * NANOS_PER_SECOND);
        m.stop(h).unwrap();

        let out = out.lock().unwrap();
        assert_eq!(out.len(), recorded.len(), "{sensor}");
        let shift = out[0].timestamp_nanos - recorded[0].timestamp_nanos;
        assert_eq!(out[0].timestamp_nanos, 123_456_789);
        for (a, b) in out.iter().zip(&recorded) {
            assert_eq!(a.timestamp_nanos - shift, b.timestamp_nanos);
            assert_eq!(a.clone().retimed(b.timestamp_nanos), *b);
        }
    }
}

#[test]
fn idle_discharge_drives_battery_sensor() {
    let p = EnergyProfile::iphone_5s();
    let none: [SensorMode; 0] = [];
    let series = simulate_discharge(&p, &none, 60.0).unwrap();
    let mut d = DischargeBatteryDriver::new(&series);
    let samples = run_driver(&mut d, 0, u64::MAX);
    // the opening reading plus one per percent lost
    assert_eq!(samples.len(), 101);
    let last = samples.last().unwrap().timestamp_nanos as f64 / 3.6e12;
    assert!(
        (last - series.time_to_empty().unwrap()).abs() < 1e-6,
        "{last}"
    );
    assert!(last - 51.27 <= 1.0);
}

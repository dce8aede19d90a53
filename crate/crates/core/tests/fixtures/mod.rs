//! One hand-picked sample per sensor type.

use sensekit_core::beacon::{
    BeaconFrame, BeaconSighting, EddystoneFrame, EddystoneUid, EddystoneUrl, IBeaconFrame,
};
use sensekit_core::payload::*;
use sensekit_core::{SensorSample, SensorType};
use uuid::Uuid;

#[allow(dead_code)]
pub fn sample_for(sensor: SensorType) -> SensorSample {
    let ts = 1_500_000_000;
    let v = Vector3::new(0.012, -0.25, 0.981);
    let payload = match sensor {
        SensorType::Accelerometer => Payload::Accelerometer(v),
        SensorType::Gravity => Payload::Gravity(Vector3::new(0.0, -0.6, -0.8)),
        SensorType::LinearAcceleration => Payload::LinearAcceleration(v),
        SensorType::Gyroscope => Payload::Gyroscope(Vector3::new(0.5, 0.0, -1.25)),
        SensorType::Rotation => Payload::Rotation(Quaternion {
            x: 0.0,
            y: 0.6,
            z: 0.0,
            w: 0.8,
        }),
        SensorType::Magnetometer => Payload::Magnetometer(Vector3::new(19.5, 0.4, -44.8)),
        SensorType::Pedometer => Payload::Pedometer(PedometerData {
            step_count: 1234,
            distance_meters: 901.5,
        }),
        SensorType::Altimeter => Payload::Altimeter(AltimeterData {
            relative_altitude_meters: -2.25,
            pressure_kpa: 101.352,
        }),
        SensorType::Humidity => Payload::Humidity(HumidityData { percent: 45.5 }),
        SensorType::Light => Payload::Light(LightData { lux: 320.0 }),
        SensorType::AmbientTemperature => {
            Payload::AmbientTemperature(TemperatureData { celsius: -3.5 })
        }
        SensorType::Location => Payload::Location(LocationData {
            latitude: 51.5246,
            longitude: -0.0404,
            altitude_meters: 21.0,
            horizontal_accuracy_meters: 5.0,
        }),
        SensorType::MotionActivity => Payload::MotionActivity(MotionActivityData {
            activity: Activity::Cycling,
            confidence: Confidence::High,
        }),
        SensorType::Battery => Payload::Battery(BatteryData {
            level: 0.5,
            state: BatteryState::Unplugged,
        }),
        SensorType::ScreenStatus => Payload::ScreenStatus(ScreenStatusData {
            status: ScreenState::Off,
        }),
        SensorType::Microphone => Payload::Microphone(MicrophoneData {
            frame_index: 42,
            rms_amplitude: 0.0625,
        }),
        SensorType::BluetoothClassic => Payload::BluetoothClassic(BluetoothDevice {
            device_address: MacAddress([0x02, 0x1A, 0x7D, 0xDA, 0x71, 0x13]),
            device_name: "JBL Flip, \"Kitchen\"".into(),
            rssi: -67,
        }),
        SensorType::IBeaconProximity => Payload::IBeaconProximity(BeaconSighting {
            frame: BeaconFrame::IBeacon(IBeaconFrame {
                uuid: Uuid::parse_str("f7826da6-4fa2-4e98-8024-bc5b71e0893e").unwrap(),
                major: 1,
                minor: 2,
                measured_power: -59,
            }),
            rssi: -71,
            timestamp_nanos: ts,
        }),
        SensorType::EddystoneProximity => Payload::EddystoneProximity(BeaconSighting {
            frame: BeaconFrame::Eddystone(EddystoneFrame::Uid(EddystoneUid {
                tx_power_at_0m: -18,
                namespace: [0xED, 0xD1, 0xEB, 0xEA, 0xC0, 0x4E, 0x5D, 0xEF, 0xA0, 0x17],
                instance: [0x00, 0x00, 0x00, 0x00, 0x00, 0x01],
            })),
            rssi: -80,
            timestamp_nanos: ts,
        }),
    };
    SensorSample::from_payload(ts, payload)
}

/// Extra Eddystone frames not covered by the one-per-type set.
#[allow(dead_code)]
pub fn eddystone_url_sample() -> SensorSample {
    let ts = 2_000_000_001;
    SensorSample::from_payload(
        ts,
        Payload::EddystoneProximity(BeaconSighting {
            frame: BeaconFrame::Eddystone(EddystoneFrame::Url(EddystoneUrl {
                tx_power_at_0m: -10,
                url: "https://www.example.com/a,b".into(),
            })),
            rssi: -60,
            timestamp_nanos: ts,
        }),
    )
}

/// Table of supported sensors as published: (sensor, iOS, Android).
#[allow(dead_code)]
pub const SUPPORTED_SENSORS: [(&str, &str, &str); 19] = [
    ("Accelerometer", "Yes", "Yes"),
    ("Gravity", "Yes*", "Yes"),
    ("LinearAcceleration", "Yes*", "Yes"),
    ("Gyroscope", "Yes", "Yes"),
    ("Rotation", "Yes*", "Yes"),
    ("Magnetometer", "Yes", "Yes"),
    ("Pedometer", "Yes", "Yes"),
    ("Altimeter", "Yes", "Yes"),
    ("Humidity", "-**", "Yes"),
    ("Light", "-**", "Yes"),
    ("AmbientTemperature", "-**", "Yes"),
    ("Location", "Yes", "Yes"),
    ("MotionActivity", "Yes", "Yes"),
    ("Battery", "Yes", "Yes"),
    ("ScreenStatus", "Yes", "Yes"),
    ("Microphone", "Yes", "Yes"),
    ("BluetoothClassic", "-", "Scanning only"),
    ("IBeaconProximity", "Yes", "Yes"),
    ("EddystoneProximity", "Scanning only***", "Yes"),
];

/// Reads a table cell as an availability label.
#[allow(dead_code)]
pub fn cell_mode(cell: &str) -> &'static str {
    let cell = cell.trim_end_matches('*');
    match cell {
        "Yes" => "full",
        "Scanning only" => "scan-only",
        "-" => "unavailable",
        other => panic!("unexpected cell {other}"),
    }
}

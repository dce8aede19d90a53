//! Per-sensor payload records.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::beacon::{BeaconFrame, BeaconSighting};
use crate::sensor::SensorType;

/// Quaternion norm tolerance for freshly generated rotation samples.
pub const QUATERNION_NORM_TOLERANCE: f64 = 1e-9;

/// Looser norm tolerance for rotations read back from six-decimal CSV.
pub const QUANTIZED_NORM_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("SchemaMismatch: expected a {expected} payload, found {found}")]
pub struct SchemaMismatch {
    pub expected: SensorType,
    pub found: SensorType,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{sensor} payload out of range: {reason}")]
pub struct SchemaViolation {
    pub sensor: SensorType,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3 { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quaternion {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        w: 1.0,
    };

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Quaternion {
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
            w: self.w / n,
        }
    }

    /// Rotates `v` by this (unit) quaternion.
    pub fn rotate(&self, v: Vector3) -> Vector3 {
        let (qx, qy, qz, qw) = (self.x, self.y, self.z, self.w);
        // t = 2 * cross(q.xyz, v)
        let tx = 2.0 * (qy * v.z - qz * v.y);
        let ty = 2.0 * (qz * v.x - qx * v.z);
        let tz = 2.0 * (qx * v.y - qy * v.x);
        Vector3 {
            x: v.x + qw * tx + (qy * tz - qz * ty),
            y: v.y + qw * ty + (qz * tx - qx * tz),
            z: v.z + qw * tz + (qx * ty - qy * tx),
        }
    }

    pub fn conjugate(&self) -> Self {
        Quaternion {
            x: -self.x,
            y: -self.y,
            z: -self.z,
            w: self.w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PedometerData {
    pub step_count: u64,
    pub distance_meters: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AltimeterData {
    pub relative_altitude_meters: f64,
    #[serde(rename = "pressureKPa")]
    pub pressure_kpa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HumidityData {
    pub percent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightData {
    pub lux: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperatureData {
    pub celsius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LocationData {
    pub latitude: f64,
    pub longitude: f64,
    pub altitude_meters: f64,
    pub horizontal_accuracy_meters: f64,
}

macro_rules! label_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub const fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => stringify!($variant)),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $(stringify!($variant) => Ok($name::$variant),)+
                    other => Err(format!("unknown {} `{}`", stringify!($name), other)),
                }
            }
        }
    };
}

label_enum!(
    /// Natively labelled user activity classes.
    Activity { Stationary, Walking, Running, Driving, Cycling }
);
label_enum!(Confidence { Low, Medium, High });
label_enum!(BatteryState {
    Unplugged,
    Charging,
    Full
});
label_enum!(ScreenState { On, Off });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionActivityData {
    pub activity: Activity,
    pub confidence: Confidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryData {
    pub level: f64,
    pub state: BatteryState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenStatusData {
    pub status: ScreenState,
}

/// RMS summary of one audio frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MicrophoneData {
    pub frame_index: u64,
    pub rms_amplitude: f64,
}

/// 48-bit Bluetooth device address, rendered `AA:BB:CC:DD:EE:FF`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MacAddress(pub [u8; 6]);

impl fmt::Display for MacAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.0;
        write!(
            f,
            "{:02X}:{:02X}:{:02X}:{:02X}:{:02X}:{:02X}",
            b[0], b[1], b[2], b[3], b[4], b[5]
        )
    }
}

impl FromStr for MacAddress {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 6 {
            return Err(format!("bad device address `{s}`"));
        }
        let mut out = [0u8; 6];
        for (slot, part) in out.iter_mut().zip(parts) {
            if part.len() != 2 {
                return Err(format!("bad device address `{s}`"));
            }
            *slot =
                u8::from_str_radix(part, 16).map_err(|_| format!("bad device address `{s}`"))?;
        }
        Ok(MacAddress(out))
    }
}

impl Serialize for MacAddress {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MacAddress {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BluetoothDevice {
    pub device_address: MacAddress,
    pub device_name: String,
    pub rssi: i8,
}

/// A sensor reading; the variant names the sensor it came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Accelerometer(Vector3),
    Gravity(Vector3),
    LinearAcceleration(Vector3),
    Gyroscope(Vector3),
    Rotation(Quaternion),
    Magnetometer(Vector3),
    Pedometer(PedometerData),
    Altimeter(AltimeterData),
    Humidity(HumidityData),
    Light(LightData),
    AmbientTemperature(TemperatureData),
    Location(LocationData),
    MotionActivity(MotionActivityData),
    Battery(BatteryData),
    ScreenStatus(ScreenStatusData),
    Microphone(MicrophoneData),
    BluetoothClassic(BluetoothDevice),
    IBeaconProximity(BeaconSighting),
    EddystoneProximity(BeaconSighting),
}

impl Payload {
    pub fn sensor_type(&self) -> SensorType {
        match self {
            Payload::Accelerometer(_) => SensorType::Accelerometer,
            Payload::Gravity(_) => SensorType::Gravity,
            Payload::LinearAcceleration(_) => SensorType::LinearAcceleration,
            Payload::Gyroscope(_) => SensorType::Gyroscope,
            Payload::Rotation(_) => SensorType::Rotation,
            Payload::Magnetometer(_) => SensorType::Magnetometer,
            Payload::Pedometer(_) => SensorType::Pedometer,
            Payload::Altimeter(_) => SensorType::Altimeter,
            Payload::Humidity(_) => SensorType::Humidity,
            Payload::Light(_) => SensorType::Light,
            Payload::AmbientTemperature(_) => SensorType::AmbientTemperature,
            Payload::Location(_) => SensorType::Location,
            Payload::MotionActivity(_) => SensorType::MotionActivity,
            Payload::Battery(_) => SensorType::Battery,
            Payload::ScreenStatus(_) => SensorType::ScreenStatus,
            Payload::Microphone(_) => SensorType::Microphone,
            Payload::BluetoothClassic(_) => SensorType::BluetoothClassic,
            Payload::IBeaconProximity(_) => SensorType::IBeaconProximity,
            Payload::EddystoneProximity(_) => SensorType::EddystoneProximity,
        }
    }

    /// Checks the range constraints of the payload's schema.
    pub fn validate(&self) -> Result<(), SchemaViolation> {
        self.validate_with(QUATERNION_NORM_TOLERANCE)
    }

    pub fn validate_with(&self, quaternion_tolerance: f64) -> Result<(), SchemaViolation> {
        let sensor = self.sensor_type();
        let check = |ok: bool, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(SchemaViolation {
                    sensor,
                    reason: reason.to_owned(),
                })
            }
        };
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Payload::Accelerometer(v)
            | Payload::Gravity(v)
            | Payload::LinearAcceleration(v)
            | Payload::Gyroscope(v)
            | Payload::Magnetometer(v) => check(finite(&[v.x, v.y, v.z]), "non-finite component"),
            Payload::Rotation(q) => {
                check(finite(&[q.x, q.y, q.z, q.w]), "non-finite component")?;
                check(
                    (q.norm() - 1.0).abs() <= quaternion_tolerance,
                    "quaternion is not unit length",
                )
            }
            Payload::Pedometer(p) => check(
                p.distance_meters.is_finite() && p.distance_meters >= 0.0,
                "distance must be non-negative",
            ),
            Payload::Altimeter(a) => {
                check(finite(&[a.relative_altitude_meters]), "non-finite altitude")?;
                check(
                    a.pressure_kpa.is_finite() && a.pressure_kpa > 0.0,
                    "pressure must be positive",
                )
            }
            Payload::Humidity(h) => check(
                (0.0..=100.0).contains(&h.percent),
                "humidity outside [0, 100]",
            ),
            Payload::Light(l) => check(l.lux.is_finite() && l.lux >= 0.0, "negative lux"),
            Payload::AmbientTemperature(t) => {
                check(t.celsius.is_finite(), "non-finite temperature")
            }
            Payload::Location(l) => {
                check(
                    (-90.0..=90.0).contains(&l.latitude),
                    "latitude outside [-90, 90]",
                )?;
                check(
                    (-180.0..=180.0).contains(&l.longitude),
                    "longitude outside [-180, 180]",
                )?;
                check(l.altitude_meters.is_finite(), "non-finite altitude")?;
                check(
                    l.horizontal_accuracy_meters.is_finite() && l.horizontal_accuracy_meters > 0.0,
                    "horizontal accuracy must be positive",
                )
            }
            Payload::MotionActivity(_) | Payload::ScreenStatus(_) => Ok(()),
            Payload::Battery(b) => check((0.0..=1.0).contains(&b.level), "level outside [0, 1]"),
            Payload::Microphone(m) => check(
                (0.0..=1.0).contains(&m.rms_amplitude),
                "RMS amplitude outside [0, 1]",
            ),
            Payload::BluetoothClassic(d) => check(
                (BeaconSighting::MIN_RSSI..=BeaconSighting::MAX_RSSI).contains(&d.rssi),
                "RSSI outside [-120, 0]",
            ),
            Payload::IBeaconProximity(s) => {
                check(
                    matches!(s.frame, BeaconFrame::IBeacon(_)),
                    "not an iBeacon frame",
                )?;
                check(
                    (BeaconSighting::MIN_RSSI..=BeaconSighting::MAX_RSSI).contains(&s.rssi),
                    "RSSI outside [-120, 0]",
                )
            }
            Payload::EddystoneProximity(s) => {
                check(
                    matches!(s.frame, BeaconFrame::Eddystone(_)),
                    "not an Eddystone frame",
                )?;
                check(
                    (BeaconSighting::MIN_RSSI..=BeaconSighting::MAX_RSSI).contains(&s.rssi),
                    "RSSI outside [-120, 0]",
                )
            }
        }
    }
}

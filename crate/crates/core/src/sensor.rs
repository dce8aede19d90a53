//! Sensor kinds and per-platform availability.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Every sensing module the framework knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SensorType {
    Accelerometer,
    Gravity,
    LinearAcceleration,
    Gyroscope,
    Rotation,
    Magnetometer,
    Pedometer,
    Altimeter,
    Humidity,
    Light,
    AmbientTemperature,
    Location,
    MotionActivity,
    Battery,
    ScreenStatus,
    Microphone,
    BluetoothClassic,
    IBeaconProximity,
    EddystoneProximity,
}

impl SensorType {
    pub const ALL: [SensorType; 19] = [
        SensorType::Accelerometer,
        SensorType::Gravity,
        SensorType::LinearAcceleration,
        SensorType::Gyroscope,
        SensorType::Rotation,
        SensorType::Magnetometer,
        SensorType::Pedometer,
        SensorType::Altimeter,
        SensorType::Humidity,
        SensorType::Light,
        SensorType::AmbientTemperature,
        SensorType::Location,
        SensorType::MotionActivity,
        SensorType::Battery,
        SensorType::ScreenStatus,
        SensorType::Microphone,
        SensorType::BluetoothClassic,
        SensorType::IBeaconProximity,
        SensorType::EddystoneProximity,
    ];

    /// Stable name used in file names, CSV/JSON output and profile files.
    pub const fn canonical_name(self) -> &'static str {
        match self {
            SensorType::Accelerometer => "Accelerometer",
            SensorType::Gravity => "Gravity",
            SensorType::LinearAcceleration => "LinearAcceleration",
            SensorType::Gyroscope => "Gyroscope",
            SensorType::Rotation => "Rotation",
            SensorType::Magnetometer => "Magnetometer",
            SensorType::Pedometer => "Pedometer",
            SensorType::Altimeter => "Altimeter",
            SensorType::Humidity => "Humidity",
            SensorType::Light => "Light",
            SensorType::AmbientTemperature => "AmbientTemperature",
            SensorType::Location => "Location",
            SensorType::MotionActivity => "MotionActivity",
            SensorType::Battery => "Battery",
            SensorType::ScreenStatus => "ScreenStatus",
            SensorType::Microphone => "Microphone",
            SensorType::BluetoothClassic => "BluetoothClassic",
            SensorType::IBeaconProximity => "IBeaconProximity",
            SensorType::EddystoneProximity => "EddystoneProximity",
        }
    }

    /// Looks up a sensor by canonical name.
    pub fn from_canonical_name(name: &str) -> Option<SensorType> {
        SensorType::ALL
            .into_iter()
            .find(|t| t.canonical_name() == name)
    }

    /// Lenient lookup for operator input: accepts the canonical name in any
    /// case, with or without `-`/`_` separators (`linear-acceleration`).
    pub fn from_loose_name(name: &str) -> Option<SensorType> {
        let squash = |s: &str| {
            s.chars()
                .filter(|c| *c != '-' && *c != '_')
                .flat_map(char::to_lowercase)
                .collect::<String>()
        };
        let wanted = squash(name);
        SensorType::ALL
            .into_iter()
            .find(|t| squash(t.canonical_name()) == wanted)
    }

    /// Sensors that report on state change instead of on a sampling clock.
    pub const fn is_event_driven(self) -> bool {
        matches!(
            self,
            SensorType::Battery
                | SensorType::ScreenStatus
                | SensorType::MotionActivity
                | SensorType::Pedometer
        )
    }

    pub const fn is_beacon(self) -> bool {
        matches!(
            self,
            SensorType::IBeaconProximity | SensorType::EddystoneProximity
        )
    }

    /// Fused outputs that iOS delivers through its Device Motion service.
    pub const fn is_device_motion_component(self) -> bool {
        matches!(
            self,
            SensorType::Gravity | SensorType::LinearAcceleration | SensorType::Rotation
        )
    }
}

impl fmt::Display for SensorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown sensor name `{0}`")]
pub struct UnknownSensor(pub String);

impl FromStr for SensorType {
    type Err = UnknownSensor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SensorType::from_canonical_name(s).ok_or_else(|| UnknownSensor(s.to_owned()))
    }
}

/// How much of a sensor a platform exposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Availability {
    Full,
    ScanOnly,
    Unavailable,
}

impl Availability {
    pub const fn as_str(self) -> &'static str {
        match self {
            Availability::Full => "full",
            Availability::ScanOnly => "scan-only",
            Availability::Unavailable => "unavailable",
        }
    }
}

impl fmt::Display for Availability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Availability {
    type Err = ProfileParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Availability::Full),
            "scan-only" => Ok(Availability::ScanOnly),
            "unavailable" => Ok(Availability::Unavailable),
            other => Err(ProfileParseError::UnknownMode {
                line: 0,
                value: other.to_owned(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileParseError {
    #[error("line {line}: expected `<sensor>=<full|scan-only|unavailable>`")]
    Malformed { line: usize },
    #[error("line {line}: unknown sensor `{name}`")]
    UnknownSensor { line: usize, name: String },
    #[error("line {line}: unknown availability `{value}`")]
    UnknownMode { line: usize, value: String },
    #[error("line {line}: `{name}` listed twice")]
    Duplicate { line: usize, name: String },
    #[error("unknown platform profile `{0}`")]
    UnknownProfile(String),
}

/// A device class: which sensors it exposes and in which mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatformProfile {
    name: String,
    availability: BTreeMap<SensorType, Availability>,
    fused_device_motion: bool,
}

impl PlatformProfile {
    /// Apple iOS: no humidity, light, ambient temperature or Bluetooth
    /// Classic access; Eddystone can be scanned but not broadcast. Gravity,
    /// linear acceleration and rotation come from the fused Device Motion
    /// service.
    pub fn ios() -> Self {
        let availability = SensorType::ALL
            .into_iter()
            .map(|t| {
                let mode = match t {
                    SensorType::Humidity
                    | SensorType::Light
                    | SensorType::AmbientTemperature
                    | SensorType::BluetoothClassic => Availability::Unavailable,
                    SensorType::EddystoneProximity => Availability::ScanOnly,
                    _ => Availability::Full,
                };
                (t, mode)
            })
            .collect();
        PlatformProfile {
            name: "ios".to_owned(),
            availability,
            fused_device_motion: true,
        }
    }

    /// Google Android: everything, Bluetooth Classic scanning only.
    pub fn android() -> Self {
        let availability = SensorType::ALL
            .into_iter()
            .map(|t| {
                let mode = match t {
                    SensorType::BluetoothClassic => Availability::ScanOnly,
                    _ => Availability::Full,
                };
                (t, mode)
            })
            .collect();
        PlatformProfile {
            name: "android".to_owned(),
            availability,
            fused_device_motion: false,
        }
    }

    pub fn builtin(name: &str) -> Result<Self, ProfileParseError> {
        match name {
            "ios" => Ok(Self::ios()),
            "android" => Ok(Self::android()),
            other => Err(ProfileParseError::UnknownProfile(other.to_owned())),
        }
    }

    /// Parses `<canonical-name>=<full|scan-only|unavailable>` lines. Blank
    /// lines and `#` comments are skipped; sensors not listed are
    /// unavailable.
    pub fn parse(name: &str, text: &str) -> Result<Self, ProfileParseError> {
        let mut availability: BTreeMap<SensorType, Availability> = SensorType::ALL
            .into_iter()
            .map(|t| (t, Availability::Unavailable))
            .collect();
        let mut seen = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or(ProfileParseError::Malformed { line })?;
            let (key, value) = (key.trim(), value.trim());
            let sensor = SensorType::from_canonical_name(key).ok_or_else(|| {
                ProfileParseError::UnknownSensor {
                    line,
                    name: key.to_owned(),
                }
            })?;
            let mode =
                value
                    .parse::<Availability>()
                    .map_err(|_| ProfileParseError::UnknownMode {
                        line,
                        value: value.to_owned(),
                    })?;
            if seen.contains(&sensor) {
                return Err(ProfileParseError::Duplicate {
                    line,
                    name: key.to_owned(),
                });
            }
            seen.push(sensor);
            availability.insert(sensor, mode);
        }
        Ok(PlatformProfile {
            name: name.to_owned(),
            availability,
            fused_device_motion: false,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn availability(&self, sensor: SensorType) -> Availability {
        self.availability
            .get(&sensor)
            .copied()
            .unwrap_or(Availability::Unavailable)
    }

    /// Whether gravity, linear acceleration and rotation share one fused
    /// sampling schedule on this platform.
    pub fn fused_device_motion(&self) -> bool {
        self.fused_device_motion
    }

    pub fn with_fused_device_motion(mut self, fused: bool) -> Self {
        self.fused_device_motion = fused;
        self
    }

    /// Renders the profile in the same text format `parse` reads.
    pub fn to_text(&self) -> String {
        SensorType::ALL
            .into_iter()
            .map(|t| format!("{}={}\n", t, self.availability(t)))
            .collect()
    }
}

/// Pure availability lookup.
pub fn is_sensor_available(sensor: SensorType, profile: &PlatformProfile) -> Availability {
    profile.availability(sensor)
}

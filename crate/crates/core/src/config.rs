//! Per-sensor configuration objects.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beacon::{BeaconFrame, EddystoneFrame, IBeaconFrame};
use crate::sensor::SensorType;

/// Location accuracy setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AccuracyMode {
    Best,
    Balanced,
    LowPower,
}

impl AccuracyMode {
    pub const fn as_str(self) -> &'static str {
        match self {
            AccuracyMode::Best => "best",
            AccuracyMode::Balanced => "balanced",
            AccuracyMode::LowPower => "low-power",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BeaconRole {
    Scan,
    Broadcast,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {sensor} configuration: {reason}")]
pub struct InvalidConfig {
    pub sensor: SensorType,
    pub reason: String,
}

/// Tunable parameters for one sensor.
///
/// `sample_rate_hz` is required for clocked sensors and must be absent for
/// event-driven ones. For the microphone it is the audio sample rate; one
/// RMS frame is reported per [`MICROPHONE_FRAME_LEN`] audio samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SensorConfig {
    pub sensor_type: SensorType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_rate_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<AccuracyMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beacon_identity: Option<BeaconFrame>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub roles: BTreeSet<BeaconRole>,
}

/// Audio samples summarised by one microphone frame.
pub const MICROPHONE_FRAME_LEN: u32 = 1024;

impl SensorConfig {
    /// A valid configuration with the rates used for the reference battery
    /// measurements where one exists.
    pub fn default_for(sensor_type: SensorType) -> Self {
        let sample_rate_hz = match sensor_type {
            t if t.is_event_driven() => None,
            SensorType::Accelerometer
            | SensorType::Gravity
            | SensorType::LinearAcceleration
            | SensorType::Gyroscope
            | SensorType::Rotation
            | SensorType::Magnetometer => Some(100.0),
            SensorType::Microphone => Some(44_100.0),
            _ => Some(1.0),
        };
        let accuracy = (sensor_type == SensorType::Location).then_some(AccuracyMode::Best);
        let roles = if sensor_type.is_beacon() {
            BTreeSet::from([BeaconRole::Scan])
        } else {
            BTreeSet::new()
        };
        SensorConfig {
            sensor_type,
            sample_rate_hz,
            accuracy,
            beacon_identity: None,
            roles,
        }
    }

    pub fn with_rate(mut self, hz: f64) -> Self {
        self.sample_rate_hz = Some(hz);
        self
    }

    pub fn with_accuracy(mut self, accuracy: AccuracyMode) -> Self {
        self.accuracy = Some(accuracy);
        self
    }

    pub fn with_roles(mut self, roles: impl IntoIterator<Item = BeaconRole>) -> Self {
        self.roles = roles.into_iter().collect();
        self
    }

    pub fn with_identity(mut self, frame: impl Into<BeaconFrame>) -> Self {
        self.beacon_identity = Some(frame.into());
        self
    }

    pub fn broadcasts(&self) -> bool {
        self.roles.contains(&BeaconRole::Broadcast)
    }

    pub fn scans(&self) -> bool {
        self.roles.contains(&BeaconRole::Scan)
    }

    /// Checks every field against the sensor it configures.
    pub fn validate(&self) -> Result<(), InvalidConfig> {
        let sensor = self.sensor_type;
        let fail = |reason: &str| {
            Err(InvalidConfig {
                sensor,
                reason: reason.to_owned(),
            })
        };

        match (sensor.is_event_driven(), self.sample_rate_hz) {
            (true, Some(_)) => return fail("event-driven sensors take no sample rate"),
            (false, None) => return fail("sample rate required"),
            (false, Some(hz)) if !(hz.is_finite() && hz > 0.0) => {
                return fail("sample rate must be a positive number")
            }
            _ => {}
        }

        if self.accuracy.is_some() && sensor != SensorType::Location {
            return fail("accuracy mode applies to Location only");
        }

        if sensor.is_beacon() {
            if self.roles.is_empty() {
                return fail("beacon sensors need at least one role");
            }
        } else if !self.roles.is_empty() {
            return fail("roles apply to beacon sensors only");
        }

        match (sensor, &self.beacon_identity) {
            (SensorType::IBeaconProximity, Some(BeaconFrame::IBeacon(_))) if self.broadcasts() => {}
            (SensorType::IBeaconProximity, None) if !self.broadcasts() => {}
            (SensorType::IBeaconProximity, _) if self.broadcasts() => {
                return fail("broadcasting needs an iBeacon identity")
            }
            (SensorType::IBeaconProximity, Some(_)) => {
                return fail("beacon identity given without the broadcast role")
            }
            (SensorType::EddystoneProximity, None) => {}
            (SensorType::EddystoneProximity, Some(BeaconFrame::Eddystone(frame))) => {
                if !self.broadcasts() {
                    return fail("beacon identity given without the broadcast role");
                }
                if matches!(frame, EddystoneFrame::Tlm(_)) {
                    return fail("telemetry frames cannot serve as a broadcast identity");
                }
            }
            (SensorType::EddystoneProximity, Some(_)) => {
                return fail("Eddystone sensors broadcast Eddystone frames")
            }
            (_, Some(_)) => return fail("beacon identity applies to beacon sensors only"),
            (_, None) => {}
        }
        Ok(())
    }

    /// Rate at which the driver produces samples, if clocked.
    pub fn tick_rate_hz(&self) -> Option<f64> {
        let hz = self.sample_rate_hz?;
        if self.sensor_type == SensorType::Microphone {
            Some(hz / f64::from(MICROPHONE_FRAME_LEN))
        } else {
            Some(hz)
        }
    }
}

impl From<IBeaconFrame> for BeaconFrame {
    fn from(frame: IBeaconFrame) -> Self {
        BeaconFrame::IBeacon(frame)
    }
}

impl From<EddystoneFrame> for BeaconFrame {
    fn from(frame: EddystoneFrame) -> Self {
        BeaconFrame::Eddystone(frame)
    }
}

impl fmt::Display for BeaconRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BeaconRole::Scan => "scan",
            BeaconRole::Broadcast => "broadcast",
        })
    }
}

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EnergyError;

/// Label of one calibrated sensing mode, e.g. `location-best`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SensorMode(String);

impl SensorMode {
    pub fn new(label: impl Into<String>) -> Self {
        SensorMode(label.into())
    }

    pub fn idle() -> Self {
        BuiltinMode::Idle.mode()
    }

    pub fn label(&self) -> &str {
        &self.0
    }

    pub fn is_idle(&self) -> bool {
        self.0 == BuiltinMode::Idle.label()
    }

    pub fn builtin(&self) -> Option<BuiltinMode> {
        BuiltinMode::ALL.into_iter().find(|b| b.label() == self.0)
    }

    pub fn category(&self) -> ModeCategory {
        self.builtin()
            .map_or(ModeCategory::Custom, BuiltinMode::category)
    }
}

impl fmt::Display for SensorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<BuiltinMode> for SensorMode {
    fn from(m: BuiltinMode) -> Self {
        m.mode()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeCategory {
    Baseline,
    Motion,
    Location,
    Radio,
    Audio,
    Custom,
}

/// The reference measurement rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinMode {
    Idle,
    Accelerometer,
    Gyroscope,
    Magnetometer,
    DeviceMotion,
    LocationBest,
    IBeaconBroadcast,
    IBeaconScan,
    IBeaconScanBroadcast,
    Microphone,
}

impl BuiltinMode {
    pub const ALL: [BuiltinMode; 10] = [
        BuiltinMode::Idle,
        BuiltinMode::Accelerometer,
        BuiltinMode::Gyroscope,
        BuiltinMode::Magnetometer,
        BuiltinMode::DeviceMotion,
        BuiltinMode::LocationBest,
        BuiltinMode::IBeaconBroadcast,
        BuiltinMode::IBeaconScan,
        BuiltinMode::IBeaconScanBroadcast,
        BuiltinMode::Microphone,
    ];

    pub const fn label(self) -> &'static str {
        match self {
            BuiltinMode::Idle => "idle",
            BuiltinMode::Accelerometer => "accelerometer",
            BuiltinMode::Gyroscope => "gyroscope",
            BuiltinMode::Magnetometer => "magnetometer",
            BuiltinMode::DeviceMotion => "device-motion",
            BuiltinMode::LocationBest => "location-best",
            BuiltinMode::IBeaconBroadcast => "ibeacon-broadcast",
            BuiltinMode::IBeaconScan => "ibeacon-scan",
            BuiltinMode::IBeaconScanBroadcast => "ibeacon-scan-broadcast",
            BuiltinMode::Microphone => "microphone",
        }
    }

    /// Sampling rate the row was measured at.
    pub const fn rate_label(self) -> &'static str {
        match self {
            BuiltinMode::Idle => "-",
            BuiltinMode::Accelerometer
            | BuiltinMode::Gyroscope
            | BuiltinMode::Magnetometer
            | BuiltinMode::DeviceMotion => "100 Hz",
            BuiltinMode::LocationBest => "Best Accuracy",
            BuiltinMode::IBeaconBroadcast
            | BuiltinMode::IBeaconScan
            | BuiltinMode::IBeaconScanBroadcast => "1 Hz",
            BuiltinMode::Microphone => "44100.0 Hz",
        }
    }

    pub const fn category(self) -> ModeCategory {
        match self {
            BuiltinMode::Idle => ModeCategory::Baseline,
            BuiltinMode::Accelerometer
            | BuiltinMode::Gyroscope
            | BuiltinMode::Magnetometer
            | BuiltinMode::DeviceMotion => ModeCategory::Motion,
            BuiltinMode::LocationBest => ModeCategory::Location,
            BuiltinMode::IBeaconBroadcast
            | BuiltinMode::IBeaconScan
            | BuiltinMode::IBeaconScanBroadcast => ModeCategory::Radio,
            BuiltinMode::Microphone => ModeCategory::Audio,
        }
    }

    /// Rows that were measured as a combination of other rows.
    pub const fn components(self) -> &'static [BuiltinMode] {
        match self {
            BuiltinMode::IBeaconScanBroadcast => {
                &[BuiltinMode::IBeaconScan, BuiltinMode::IBeaconBroadcast]
            }
            _ => &[],
        }
    }

    pub fn mode(self) -> SensorMode {
        SensorMode(self.label().to_owned())
    }
}

/// Battery capacity plus the measured lifetime of each sensing mode.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyProfile {
    device_name: String,
    capacity_mah: f64,
    hours_lasted: BTreeMap<SensorMode, f64>,
}

const IPHONE_5S_PROFILE: &str = include_str!("../../profiles/iphone5s.profile");

impl EnergyProfile {
    pub fn new(
        device_name: impl Into<String>,
        capacity_mah: f64,
        hours_lasted: BTreeMap<SensorMode, f64>,
    ) -> Result<Self, EnergyError> {
        let profile = EnergyProfile {
            device_name: device_name.into(),
            capacity_mah,
            hours_lasted,
        };
        profile.check()?;
        Ok(profile)
    }

    fn check(&self) -> Result<(), EnergyError> {
        let violation = |m: String| Err(EnergyError::InvariantViolation(m));
        if !(self.capacity_mah.is_finite() && self.capacity_mah > 0.0) {
            return violation(format!(
                "capacity must be positive, got {}",
                self.capacity_mah
            ));
        }
        for (mode, hours) in &self.hours_lasted {
            if !(hours.is_finite() && *hours > 0.0) {
                return violation(format!(
                    "mode `{mode}` must last a positive time, got {hours}"
                ));
            }
        }
        if !self.hours_lasted.contains_key(&SensorMode::idle()) {
            return violation("profile has no `idle` row".to_owned());
        }
        Ok(())
    }

    /// The reference handset: 1560 mAh and ten measured rows.
    pub fn iphone_5s() -> Self {
        Self::parse(IPHONE_5S_PROFILE).expect("embedded profile is valid")
    }

    pub fn builtin_text() -> &'static str {
        IPHONE_5S_PROFILE
    }

    /// Reads `device=`, `capacity_mAh=` and `mode.<label>=<hours>` lines;
    /// blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, EnergyError> {
        let mut device = None;
        let mut capacity = None;
        let mut hours = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| EnergyError::Parse { line, message };
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| parse_err("expected `key=value`".to_owned()))?;
            let (key, value) = (key.trim(), value.trim());
            let number = || {
                value
                    .parse::<f64>()
                    .map_err(|_| parse_err(format!("`{value}` is not a number")))
            };
            match key {
                "device" => {
                    if device.replace(value.to_owned()).is_some() {
                        return Err(parse_err("`device` given twice".to_owned()));
                    }
                }
                "capacity_mAh" => {
                    if capacity.replace(number()?).is_some() {
                        return Err(parse_err("`capacity_mAh` given twice".to_owned()));
                    }
                }
                _ => {
                    let label = key
                        .strip_prefix("mode.")
                        .filter(|l| !l.is_empty())
                        .ok_or_else(|| parse_err(format!("unknown key `{key}`")))?;
                    if hours.insert(SensorMode::new(label), number()?).is_some() {
                        return Err(parse_err(format!("mode `{label}` given twice")));
                    }
                }
            }
        }
        let device = device.ok_or(EnergyError::Parse {
            line: 0,
            message: "missing `device=` line".to_owned(),
        })?;
        let capacity = capacity.ok_or(EnergyError::Parse {
            line: 0,
            message: "missing `capacity_mAh=` line".to_owned(),
        })?;
        EnergyProfile::new(device, capacity, hours)
    }

    pub fn device_name(&self) -> &str {
        &self.device_name
    }

    pub fn capacity_mah(&self) -> f64 {
        self.capacity_mah
    }

    pub fn hours_lasted(&self, mode: &SensorMode) -> Result<f64, EnergyError> {
        self.hours_lasted
            .get(mode)
            .copied()
            .ok_or_else(|| EnergyError::UnknownMode(mode.label().to_owned()))
    }

    pub fn idle_hours(&self) -> f64 {
        self.hours_lasted[&SensorMode::idle()]
    }

    pub fn modes(&self) -> impl Iterator<Item = (&SensorMode, f64)> {
        self.hours_lasted.iter().map(|(m, h)| (m, *h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_profile() {
        let p = EnergyProfile::iphone_5s();
        assert_eq!(p.device_name(), "iPhone 5S");
        assert_eq!(p.capacity_mah(), 1560.0);
        assert_eq!(
            p.hours_lasted(&BuiltinMode::Microphone.mode()).unwrap(),
            35.41
        );
        assert_eq!(p.modes().count(), 10);
        for b in BuiltinMode::ALL {
            assert!(p.hours_lasted(&b.mode()).is_ok(), "{b:?}");
        }
    }

    #[test]
    fn missing_idle() {
        let err = EnergyProfile::parse("device=x\ncapacity_mAh=100\nmode.gps=3\n").unwrap_err();
        assert!(matches!(err, EnergyError::InvariantViolation(_)));
    }

    #[test]
    fn negative_hours() {
        let err = EnergyProfile::parse("device=x\ncapacity_mAh=100\nmode.idle=10\nmode.gps=-3\n")
            .unwrap_err();
        assert!(matches!(err, EnergyError::InvariantViolation(_)));
        let err = EnergyProfile::parse("device=x\ncapacity_mAh=0\nmode.idle=10\n").unwrap_err();
        assert!(matches!(err, EnergyError::InvariantViolation(_)));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            EnergyProfile::parse("device=x\ncapacity_mAh=abc\n"),
            Err(EnergyError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            EnergyProfile::parse("device=x\nvoltage=3.8\n"),
            Err(EnergyError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            EnergyProfile::parse("capacity_mAh=10\nmode.idle=1\n"),
            Err(EnergyError::Parse { .. })
        ));
        assert!(matches!(
            EnergyProfile::parse("device=x\ncapacity_mAh=10\nmode.idle=1\nmode.idle=2\n"),
            Err(EnergyError::Parse { line: 4, .. })
        ));
    }
}

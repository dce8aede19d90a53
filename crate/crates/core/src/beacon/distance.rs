use serde::{Deserialize, Serialize};

use super::BeaconError;

/// Free-space propagation.
pub const DEFAULT_PATH_LOSS_EXPONENT: f64 = 2.0;

/// Eddystone advertises power at 0 m; subtracting this gives the 1 m figure
/// iBeacon calls Measured Power.
pub const EDDYSTONE_0M_TO_1M_DB: f64 = 41.0;

/// Log-distance path-loss model.
///
/// `d = 10^((reference - rssi) / (10 n))`, where `reference` is the RSSI
/// expected at one metre.
pub fn estimate_distance(
    rssi: f64,
    reference_power: f64,
    exponent: f64,
) -> Result<f64, BeaconError> {
    if !(exponent > 0.0 && exponent.is_finite()) {
        return Err(BeaconError::InvalidExponent(exponent));
    }
    Ok(10f64.powf((reference_power - rssi) / (10.0 * exponent)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub exponent: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        PathLossModel {
            exponent: DEFAULT_PATH_LOSS_EXPONENT,
        }
    }
}

impl PathLossModel {
    pub fn new(exponent: f64) -> Result<Self, BeaconError> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(BeaconError::InvalidExponent(exponent));
        }
        Ok(PathLossModel { exponent })
    }

    pub fn distance(&self, rssi: f64, reference_power: f64) -> f64 {
        10f64.powf((reference_power - rssi) / (10.0 * self.exponent))
    }

    /// Inverse of [`PathLossModel::distance`].
    pub fn rssi_at(&self, distance: f64, reference_power: f64) -> f64 {
        reference_power - 10.0 * self.exponent * distance.log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProximityZone {
    Immediate,
    Near,
    Far,
    Unknown,
}

/// Zone boundaries in metres. A distance below `immediate` is Immediate,
/// below `near` is Near, anything further is Far.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneThresholds {
    pub immediate: f64,
    pub near: f64,
}

impl Default for ZoneThresholds {
    fn default() -> Self {
        ZoneThresholds {
            immediate: 0.5,
            near: 4.0,
        }
    }
}

impl ZoneThresholds {
    pub fn classify(&self, distance: Option<f64>) -> ProximityZone {
        match distance {
            Some(d) if d.is_finite() && d > 0.0 => {
                if d < self.immediate {
                    ProximityZone::Immediate
                } else if d < self.near {
                    ProximityZone::Near
                } else {
                    ProximityZone::Far
                }
            }
            _ => ProximityZone::Unknown,
        }
    }
}

/// Classifies with the default 0.5 m / 4 m boundaries.
pub fn proximity_zone(distance: Option<f64>) -> ProximityZone {
    ZoneThresholds::default().classify(distance)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProximityEstimate {
    pub distance_meters: Option<f64>,
    pub zone: ProximityZone,
}

impl ProximityEstimate {
    pub fn from_distance(distance: f64, thresholds: &ZoneThresholds) -> Self {
        let distance_meters = (distance.is_finite() && distance > 0.0).then_some(distance);
        ProximityEstimate {
            distance_meters,
            zone: thresholds.classify(distance_meters),
        }
    }

    pub fn unknown() -> Self {
        ProximityEstimate {
            distance_meters: None,
            zone: ProximityZone::Unknown,
        }
    }
}

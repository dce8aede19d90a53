use std::collections::BTreeSet;

use crate::config::{AccuracyMode, SensorConfig};
use crate::sensor::SensorType;

use super::profile::{BuiltinMode, EnergyProfile, ModeCategory, SensorMode};
use super::EnergyError;

/// Mean current that empties the battery in the measured time.
pub fn current_draw(profile: &EnergyProfile, mode: &SensorMode) -> Result<f64, EnergyError> {
    Ok(profile.capacity_mah() / profile.hours_lasted(mode)?)
}

/// Extra current a mode draws on top of idle. A mode measured cheaper than
/// idle contributes nothing.
pub fn overhead_draw(profile: &EnergyProfile, mode: &SensorMode) -> Result<f64, EnergyError> {
    let idle = current_draw(profile, &SensorMode::idle())?;
    let overhead = current_draw(profile, mode)? - idle;
    if overhead < 0.0 {
        log::warn!(
            "mode `{mode}` measured cheaper than idle ({overhead:.3} mA); treating its overhead as 0"
        );
        return Ok(0.0);
    }
    Ok(overhead)
}

/// Notes attached to a prediction the calibration data cannot vouch for.
#[derive(Debug, Clone, PartialEq)]
pub enum Caveat {
    /// Several modes were summed; only single-mode runs were measured.
    AdditiveComposition { modes: usize },
    /// The set mixes sensor categories (e.g. motion and radio).
    CrossCategory,
    /// The profile holds a direct measurement of this exact combination.
    MeasuredCombination {
        mode: SensorMode,
        measured_hours: f64,
        relative_error: f64,
    },
}

impl std::fmt::Display for Caveat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Caveat::AdditiveComposition { modes } => write!(
                f,
                "note: additive model over {modes} modes; each mode was calibrated alone"
            ),
            Caveat::CrossCategory => write!(
                f,
                "note: the set mixes sensor categories; additivity across them is unverified"
            ),
            Caveat::MeasuredCombination {
                mode,
                measured_hours,
                relative_error,
            } => write!(
                f,
                "note: measured `{mode}` lasted {measured_hours:.2} h; model error {:.1}%",
                relative_error * 100.0
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub hours: f64,
    pub draw_milliamps: f64,
    pub caveats: Vec<Caveat>,
}

/// Lifetime under a set of concurrently active modes: the idle draw plus
/// the sum of each mode's overhead. `idle` entries are ignored, so the empty
/// set predicts the idle lifetime and a single mode predicts its own
/// measured lifetime.
pub fn predict_lifetime<'a>(
    profile: &EnergyProfile,
    modes: impl IntoIterator<Item = &'a SensorMode>,
) -> Result<Prediction, EnergyError> {
    let active: BTreeSet<&SensorMode> = modes.into_iter().filter(|m| !m.is_idle()).collect();
    let mut draw = current_draw(profile, &SensorMode::idle())?;
    for mode in &active {
        draw += overhead_draw(profile, mode)?;
    }
    let hours = profile.capacity_mah() / draw;

    let mut caveats = Vec::new();
    if active.len() > 1 {
        caveats.push(Caveat::AdditiveComposition {
            modes: active.len(),
        });
        let categories: BTreeSet<_> = active
            .iter()
            .map(|m| format!("{:?}", m.category()))
            .collect();
        if categories.len() > 1 || active.iter().any(|m| m.category() == ModeCategory::Custom) {
            caveats.push(Caveat::CrossCategory);
        }
        for combo in BuiltinMode::ALL {
            let parts: BTreeSet<SensorMode> = combo.components().iter().map(|b| b.mode()).collect();
            if parts.is_empty() || parts.len() != active.len() {
                continue;
            }
            if active.iter().all(|m| parts.contains(*m)) {
                if let Ok(measured) = profile.hours_lasted(&combo.mode()) {
                    caveats.push(Caveat::MeasuredCombination {
                        mode: combo.mode(),
                        measured_hours: measured,
                        relative_error: (hours - measured).abs() / measured,
                    });
                }
            }
        }
    }
    Ok(Prediction {
        hours,
        draw_milliamps: draw,
        caveats,
    })
}

/// Maps configured sensors onto calibrated modes. Only the measured rates
/// are accepted; other rates need their own profile row. Battery sensing is
/// part of the idle baseline.
pub fn modes_for_configs<'a>(
    configs: impl IntoIterator<Item = &'a SensorConfig>,
) -> Result<BTreeSet<SensorMode>, EnergyError> {
    let mut out = BTreeSet::new();
    for cfg in configs {
        let unmapped = |reason: &str| EnergyError::Uncalibrated {
            sensor: cfg.sensor_type,
            reason: reason.to_owned(),
        };
        let at_rate = |hz: f64, mode: BuiltinMode| {
            if cfg.sample_rate_hz == Some(hz) {
                Ok(Some(mode))
            } else {
                Err(unmapped(&format!("only calibrated at {hz} Hz")))
            }
        };
        let mode = match cfg.sensor_type {
            SensorType::Battery => None,
            SensorType::Accelerometer => at_rate(100.0, BuiltinMode::Accelerometer)?,
            SensorType::Gyroscope => at_rate(100.0, BuiltinMode::Gyroscope)?,
            SensorType::Magnetometer => at_rate(100.0, BuiltinMode::Magnetometer)?,
            t if t.is_device_motion_component() => at_rate(100.0, BuiltinMode::DeviceMotion)?,
            SensorType::Location => match cfg.accuracy.unwrap_or(AccuracyMode::Best) {
                AccuracyMode::Best => Some(BuiltinMode::LocationBest),
                _ => return Err(unmapped("only calibrated at best accuracy")),
            },
            SensorType::IBeaconProximity => {
                let mode = match (cfg.scans(), cfg.broadcasts()) {
                    (true, true) => BuiltinMode::IBeaconScanBroadcast,
                    (true, false) => BuiltinMode::IBeaconScan,
                    (false, true) => BuiltinMode::IBeaconBroadcast,
                    (false, false) => return Err(unmapped("no beacon role")),
                };
                at_rate(1.0, mode)?
            }
            SensorType::Microphone => at_rate(44_100.0, BuiltinMode::Microphone)?,
            _ => return Err(unmapped("no calibration row")),
        };
        if let Some(m) = mode {
            out.insert(m.mode());
        }
    }
    Ok(out)
}

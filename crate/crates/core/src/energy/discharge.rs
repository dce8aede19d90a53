use super::model::predict_lifetime;
use super::profile::{EnergyProfile, SensorMode};
use super::EnergyError;

/// Guard against step sizes that would allocate without bound.
const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DischargePoint {
    pub hours: f64,
    /// Remaining charge in [0, 1].
    pub level: f64,
}

/// Battery level over time under a constant load.
#[derive(Debug, Clone, PartialEq)]
pub struct DischargeSeries {
    points: Vec<DischargePoint>,
}

impl DischargeSeries {
    /// Validates: starts at level 1.0, strictly increasing time,
    /// non-increasing level within [0, 1].
    pub fn new(points: Vec<DischargePoint>) -> Result<Self, EnergyError> {
        let bad = |m: &str| Err(EnergyError::InvalidSeries(m.to_owned()));
        let Some(first) = points.first() else {
            return bad("series is empty");
        };
        if first.level != 1.0 {
            return bad("series must start at level 1.0");
        }
        for p in &points {
            if !p.hours.is_finite() || !(0.0..=1.0).contains(&p.level) {
                return bad("level outside [0, 1] or non-finite time");
            }
        }
        for w in points.windows(2) {
            if w[1].hours <= w[0].hours {
                return bad("time must be strictly increasing");
            }
            if w[1].level > w[0].level {
                return bad("level must not increase");
            }
        }
        Ok(DischargeSeries { points })
    }

    /// Straight line from full at `t = 0` to empty at `t = lifetime`.
    pub fn linear(lifetime_hours: f64, step_hours: f64) -> Result<Self, EnergyError> {
        if !(step_hours.is_finite() && step_hours > 0.0) {
            return Err(EnergyError::InvalidStep(step_hours));
        }
        if !(lifetime_hours.is_finite() && lifetime_hours > 0.0) {
            return Err(EnergyError::InvalidSeries(format!(
                "lifetime must be positive, got {lifetime_hours}"
            )));
        }
        let steps = (lifetime_hours / step_hours).ceil();
        if steps >= MAX_POINTS as f64 {
            return Err(EnergyError::InvalidStep(step_hours));
        }
        let mut points = Vec::with_capacity(steps as usize + 1);
        for k in 0.. {
            let hours = k as f64 * step_hours;
            let level = if hours >= lifetime_hours {
                0.0
            } else {
                (1.0 - hours / lifetime_hours).max(0.0)
            };
            points.push(DischargePoint { hours, level });
            if level == 0.0 {
                break;
            }
        }
        DischargeSeries::new(points)
    }

    pub fn points(&self) -> &[DischargePoint] {
        &self.points
    }

    /// Time of the first point at level 0, if the series gets there.
    pub fn time_to_empty(&self) -> Option<f64> {
        self.points.iter().find(|p| p.level == 0.0).map(|p| p.hours)
    }

    /// Level at `hours`, interpolated linearly between points.
    pub fn level_at(&self, hours: f64) -> f64 {
        let pts = &self.points;
        if hours <= pts[0].hours {
            return pts[0].level;
        }
        for w in pts.windows(2) {
            if hours <= w[1].hours {
                let f = (hours - w[0].hours) / (w[1].hours - w[0].hours);
                return w[0].level + f * (w[1].level - w[0].level);
            }
        }
        pts[pts.len() - 1].level
    }
}

/// Linear discharge at the predicted draw, sampled every `step_minutes`,
/// ending at the first point where the battery is empty.
pub fn simulate_discharge<'a>(
    profile: &EnergyProfile,
    modes: impl IntoIterator<Item = &'a SensorMode>,
    step_minutes: f64,
) -> Result<DischargeSeries, EnergyError> {
    if !(step_minutes.is_finite() && step_minutes > 0.0) {
        return Err(EnergyError::InvalidStep(step_minutes));
    }
    let lifetime = predict_lifetime(profile, modes)?.hours;
    DischargeSeries::linear(lifetime, step_minutes / 60.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::BuiltinMode;

    #[test]
    fn idle_hourly() {
        let p = EnergyProfile::iphone_5s();
        let empty: [SensorMode; 0] = [];
        let s = simulate_discharge(&p, &empty, 60.0).unwrap();
        let t = s.time_to_empty().unwrap();
        assert!((t - 51.27).abs() <= 1.0);
        assert_eq!(t, 52.0);
        assert_eq!(s.points()[0].level, 1.0);
        assert_eq!(s.points().len(), 53);
    }

    #[test]
    fn location_half_way() {
        let p = EnergyProfile::iphone_5s();
        let s = simulate_discharge(&p, &[BuiltinMode::LocationBest.mode()], 30.0).unwrap();
        let step_level = 0.5 / 17.42;
        assert!((s.level_at(8.71) - 0.5).abs() <= step_level);
        assert_eq!(s.time_to_empty(), Some(17.5));
    }

    #[test]
    fn bad_step() {
        let p = EnergyProfile::iphone_5s();
        let empty: [SensorMode; 0] = [];
        assert!(matches!(
            simulate_discharge(&p, &empty, 0.0),
            Err(EnergyError::InvalidStep(_))
        ));
        assert!(matches!(
            simulate_discharge(&p, &empty, 1e-9),
            Err(EnergyError::InvalidStep(_))
        ));
        assert!(matches!(
            simulate_discharge(&p, &[SensorMode::new("nope")], 10.0),
            Err(EnergyError::UnknownMode(_))
        ));
    }

    #[test]
    fn series_validation() {
        let pt = |hours, level| DischargePoint { hours, level };
        assert!(DischargeSeries::new(vec![pt(0.0, 0.9)]).is_err());
        assert!(DischargeSeries::new(vec![pt(0.0, 1.0), pt(0.0, 0.5)]).is_err());
        assert!(DischargeSeries::new(vec![pt(0.0, 1.0), pt(1.0, 0.5), pt(2.0, 0.6)]).is_err());
        assert!(DischargeSeries::new(vec![]).is_err());
        assert!(DischargeSeries::new(vec![pt(0.0, 1.0), pt(1.0, 1.0)]).is_ok());
    }
}

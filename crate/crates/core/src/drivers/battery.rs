use crate::clock::NANOS_PER_SECOND;
use crate::config::SensorConfig;
use crate::energy::{DischargePoint, DischargeSeries};
use crate::payload::{BatteryData, BatteryState, Payload};
use crate::sample::SensorSample;
use crate::sensor::SensorType;

use super::{Driver, DriverError};

const EPSILON: f64 = 1e-12;

/// Battery readings derived from a discharge series: one sample at start,
/// then one each time the level crosses a whole percent.
pub struct DischargeBatteryDriver {
    /// (offset from start in ns, percent)
    events: Vec<(u64, u32)>,
    cursor: usize,
    origin: u64,
    running: bool,
}

fn crossings(points: &[DischargePoint]) -> Vec<(u64, u32)> {
    let to_nanos = |h: f64| (h * 3600.0 * NANOS_PER_SECOND as f64).round() as u64;
    let start = points[0];
    let mut current = ((start.level * 100.0) + EPSILON).floor() as u32;
    let mut out = vec![(to_nanos(start.hours), current)];
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        while current > 0 {
            let boundary = f64::from(current - 1) / 100.0;
            if b.level > boundary + EPSILON {
                break;
            }
            let f = if a.level - b.level > 0.0 {
                ((a.level - boundary) / (a.level - b.level)).clamp(0.0, 1.0)
            } else {
                0.0
            };
            current -= 1;
            out.push((to_nanos(a.hours + f * (b.hours - a.hours)), current));
        }
    }
    let base = out[0].0;
    out.iter().map(|&(t, p)| (t - base, p)).collect()
}

impl DischargeBatteryDriver {
    pub fn new(series: &DischargeSeries) -> Self {
        DischargeBatteryDriver {
            events: crossings(series.points()),
            cursor: 0,
            origin: 0,
            running: false,
        }
    }

    pub fn from_points(points: Vec<DischargePoint>) -> Result<Self, DriverError> {
        let series =
            DischargeSeries::new(points).map_err(|e| DriverError::InvalidSeries(e.to_string()))?;
        Ok(Self::new(&series))
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }
}

impl Driver for DischargeBatteryDriver {
    fn sensor_type(&self) -> SensorType {
        SensorType::Battery
    }

    fn start(&mut self, at_nanos: u64) {
        if let Some(&(offset, _)) = self.events.get(self.cursor) {
            self.origin = at_nanos - offset.min(at_nanos);
        }
        self.running = true;
    }

    fn next_timestamp(&self) -> Option<u64> {
        if !self.running {
            return None;
        }
        self.events.get(self.cursor).map(|&(t, _)| self.origin + t)
    }

    fn produce(&mut self) -> Option<SensorSample> {
        let t = self.next_timestamp()?;
        let percent = self.events[self.cursor].1;
        self.cursor += 1;
        Some(SensorSample::from_payload(
            t,
            Payload::Battery(BatteryData {
                level: f64::from(percent) / 100.0,
                state: BatteryState::Unplugged,
            }),
        ))
    }

    fn reconfigure(&mut self, _config: &SensorConfig) {}
}

//! Sample sources standing in for physical sensors.
//!
//! A [`Driver`] owns its own schedule: the manager asks for the timestamp of
//! the next sample and pulls samples in timestamp order.

mod battery;
mod replay;
mod schedule;
mod synthetic;

use thiserror::Error;

use crate::config::{InvalidConfig, SensorConfig};
use crate::payload::SchemaMismatch;
use crate::sample::SensorSample;
use crate::sensor::SensorType;

pub use battery::DischargeBatteryDriver;
pub use replay::{ReplayDriver, TraceFile, TRACE_MAGIC};
pub use synthetic::{derive_seed, SyntheticDriver, MAX_WALKING_SPEED, MEAN_DWELL_SECONDS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DriverError {
    #[error(transparent)]
    InvalidConfig(#[from] InvalidConfig),
    #[error(transparent)]
    SchemaMismatch(#[from] SchemaMismatch),
    #[error("CorruptTrace: line {line}: {message}")]
    CorruptTrace { line: usize, message: String },
    #[error("InvalidSeries: {0}")]
    InvalidSeries(String),
}

pub trait Driver: Send {
    fn sensor_type(&self) -> SensorType;

    /// Begins a run at session time `at_nanos`.
    fn start(&mut self, at_nanos: u64);

    /// Timestamp of the next sample, or `None` when nothing more will come.
    fn next_timestamp(&self) -> Option<u64>;

    /// Emits the sample due at [`Driver::next_timestamp`] and moves on.
    fn produce(&mut self) -> Option<SensorSample>;

    /// Queues a configuration; it takes effect at the next scheduled sample.
    fn reconfigure(&mut self, config: &SensorConfig);
}

/// A seeded generator for `sensor`.
pub fn create_synthetic_driver(
    sensor: SensorType,
    config: &SensorConfig,
    seed: u64,
) -> Result<Box<dyn Driver>, DriverError> {
    Ok(Box::new(SyntheticDriver::new(sensor, config, seed)?))
}

/// Replays `trace` as `sensor`.
pub fn create_replay_driver(
    sensor: SensorType,
    trace: TraceFile,
) -> Result<Box<dyn Driver>, DriverError> {
    Ok(Box::new(ReplayDriver::new(sensor, trace)?))
}

/// Collects every sample a driver produces before `until_nanos`, starting
/// it at `start_nanos`. Handy for tests and offline recording.
pub fn run_driver(
    driver: &mut dyn Driver,
    start_nanos: u64,
    until_nanos: u64,
) -> Vec<SensorSample> {
    driver.start(start_nanos);
    let mut out = Vec::new();
    while let Some(t) = driver.next_timestamp() {
        if t >= until_nanos {
            break;
        }
        match driver.produce() {
            Some(s) => out.push(s),
            None => break,
        }
    }
    out
}

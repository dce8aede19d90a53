//! Battery model calibrated from single-sensor lifetime measurements.
//!
//! Each profile row records how long a full battery lasted with one mode
//! running. The mean draw of a mode is `capacity / hours`; its overhead is
//! that draw minus the idle draw. A set of modes is predicted to last
//! `capacity / (idle + sum of overheads)`. Everything is in mAh and hours.

mod discharge;
mod model;
mod profile;

use thiserror::Error;

use crate::sensor::SensorType;

pub use discharge::{simulate_discharge, DischargePoint, DischargeSeries};
pub use model::{
    current_draw, modes_for_configs, overhead_draw, predict_lifetime, Caveat, Prediction,
};
pub use profile::{BuiltinMode, EnergyProfile, ModeCategory, SensorMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("UnknownMode: `{0}` is not in the energy profile")]
    UnknownMode(String),
    #[error("ParseError: line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("InvariantViolation: {0}")]
    InvariantViolation(String),
    #[error("InvalidStep: step must be positive and not absurdly small, got {0}")]
    InvalidStep(f64),
    #[error("InvalidSeries: {0}")]
    InvalidSeries(String),
    #[error("{sensor} has no calibrated mode: {reason}")]
    Uncalibrated { sensor: SensorType, reason: String },
}

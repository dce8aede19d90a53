use std::fmt;

use sensekit_core::beacon::BeaconError;
use sensekit_core::energy::EnergyError;
use sensekit_core::serialization::SerializationError;
use sensekit_core::ManagerError;

/// Exit status 1: the input data was bad.
pub const EXIT_DATA: u8 = 1;
/// Exit status 2: bad usage or configuration.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl CliError {
    pub fn prefixed(mut self, context: &str) -> Self {
        self.message = format!("{context}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::data(format!("io error: {e}"))
    }
}

impl From<BeaconError> for CliError {
    fn from(e: BeaconError) -> Self {
        CliError::data(e.to_string())
    }
}

impl From<ManagerError> for CliError {
    fn from(e: ManagerError) -> Self {
        match e {
            ManagerError::ClockRegression(_) | ManagerError::Driver(_) => {
                CliError::data(e.to_string())
            }
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<EnergyError> for CliError {
    fn from(e: EnergyError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<SerializationError> for CliError {
    fn from(e: SerializationError) -> Self {
        match e {
            SerializationError::UnknownFileName(_) => CliError::usage(e.to_string()),
            _ => CliError::data(e.to_string()),
        }
    }
}

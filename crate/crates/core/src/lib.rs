//! Continuous sensing on simulated hardware: a sensor registry with
//! per-sensor configuration and subscriptions, BLE beacon codecs and
//! ranging, CSV/JSON export, and a battery lifetime model.

pub mod beacon;
pub mod clock;
pub mod config;
pub mod drivers;
pub mod energy;
pub mod manager;
pub mod payload;
pub mod sample;
pub mod sensor;
pub mod serialization;

pub use beacon::{BeaconError, BeaconFrame, BeaconId, BeaconSighting};
pub use clock::{SessionClock, SimulatedTimeSource, SystemTimeSource, TimeSource};
pub use config::{AccuracyMode, BeaconRole, InvalidConfig, SensorConfig};
pub use drivers::{Driver, DriverError};
pub use energy::{EnergyError, EnergyProfile, SensorMode};
pub use manager::{
    ManagerError, SensorHandle, SensorManager, SensorState, SharedSensorManager, SubscriptionId,
};
pub use payload::Payload;
pub use sample::SensorSample;
pub use sensor::{is_sensor_available, Availability, PlatformProfile, SensorType};

use crate::clock::nanos_to_seconds;
use crate::payload::{Payload, SchemaMismatch};
use crate::sensor::SensorType;

/// One timestamped reading. Timestamps are session-relative monotonic
/// nanoseconds.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSample {
    pub sensor_type: SensorType,
    pub timestamp_nanos: u64,
    pub payload: Payload,
}

impl SensorSample {
    pub fn new(
        sensor_type: SensorType,
        timestamp_nanos: u64,
        payload: Payload,
    ) -> Result<Self, SchemaMismatch> {
        let sample = SensorSample {
            sensor_type,
            timestamp_nanos,
            payload,
        };
        sample.check_schema()?;
        Ok(sample)
    }

    /// Builds a sample whose type is taken from the payload.
    pub fn from_payload(timestamp_nanos: u64, payload: Payload) -> Self {
        SensorSample {
            sensor_type: payload.sensor_type(),
            timestamp_nanos,
            payload,
        }
    }

    pub fn relative_seconds(&self) -> f64 {
        nanos_to_seconds(self.timestamp_nanos)
    }

    pub fn check_schema(&self) -> Result<(), SchemaMismatch> {
        let found = self.payload.sensor_type();
        if found == self.sensor_type {
            Ok(())
        } else {
            Err(SchemaMismatch {
                expected: self.sensor_type,
                found,
            })
        }
    }

    /// Same reading moved to another session time. Beacon sightings carry
    /// their own timestamp, which moves with it.
    pub fn retimed(mut self, timestamp_nanos: u64) -> Self {
        self.timestamp_nanos = timestamp_nanos;
        if let Payload::IBeaconProximity(s) | Payload::EddystoneProximity(s) = &mut self.payload {
            s.timestamp_nanos = timestamp_nanos;
        }
        self
    }
}

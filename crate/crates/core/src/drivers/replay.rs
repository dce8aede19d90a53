use std::fmt::Write as _;

use crate::config::SensorConfig;
use crate::payload::SchemaMismatch;
use crate::sample::SensorSample;
use crate::sensor::SensorType;
use crate::serialization::{csv_header, csv_row, parse_csv_row, SerializationError};

use super::{Driver, DriverError};

pub const TRACE_MAGIC: &str = "#sensekit-trace v1";

/// A recorded sample stream for one sensor, sorted by timestamp.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    sensor_type: SensorType,
    records: Vec<SensorSample>,
}

impl TraceFile {
    pub fn new(sensor_type: SensorType, records: Vec<SensorSample>) -> Result<Self, DriverError> {
        for (i, r) in records.iter().enumerate() {
            if r.sensor_type != sensor_type {
                return Err(SchemaMismatch {
                    expected: sensor_type,
                    found: r.sensor_type,
                }
                .into());
            }
            if i > 0 && r.timestamp_nanos < records[i - 1].timestamp_nanos {
                return Err(DriverError::CorruptTrace {
                    line: i + 3,
                    message: "timestamps out of order".into(),
                });
            }
        }
        Ok(TraceFile {
            sensor_type,
            records,
        })
    }

    pub fn sensor_type(&self) -> SensorType {
        self.sensor_type
    }

    pub fn records(&self) -> &[SensorSample] {
        &self.records
    }

    pub fn parse(text: &str) -> Result<Self, DriverError> {
        let corrupt = |line: usize, message: String| DriverError::CorruptTrace { line, message };
        let mut lines = text.lines();
        let first = lines
            .next()
            .ok_or_else(|| corrupt(1, "empty trace".into()))?;
        let name = first
            .strip_prefix(TRACE_MAGIC)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| corrupt(1, format!("expected `{TRACE_MAGIC} <sensor>`")))?;
        let sensor = SensorType::from_canonical_name(name.trim())
            .ok_or_else(|| corrupt(1, format!("unknown sensor `{}`", name.trim())))?;
        let header = lines
            .next()
            .ok_or_else(|| corrupt(2, "missing header".into()))?;
        if header != csv_header(sensor) {
            return Err(corrupt(2, format!("header does not match {sensor}")));
        }
        let mut records = Vec::new();
        let mut last = 0u64;
        for (i, line) in lines.enumerate() {
            let n = i + 3;
            if line.is_empty() {
                continue;
            }
            let sample = parse_csv_row(sensor, line).map_err(|e| corrupt(n, e.to_string()))?;
            if sample.timestamp_nanos < last {
                return Err(corrupt(n, "timestamps out of order".into()));
            }
            last = sample.timestamp_nanos;
            records.push(sample);
        }
        Ok(TraceFile {
            sensor_type: sensor,
            records,
        })
    }

    pub fn render(&self) -> Result<String, SerializationError> {
        let mut out = format!(
            "{TRACE_MAGIC} {}\n{}\n",
            self.sensor_type,
            csv_header(self.sensor_type)
        );
        for r in &self.records {
            let _ = writeln!(out, "{}", csv_row(r)?);
        }
        Ok(out)
    }
}

/// Plays a trace back, shifted so that the next unplayed record lands at the
/// start time. Gaps between records are kept exactly.
pub struct ReplayDriver {
    trace: TraceFile,
    cursor: usize,
    shift: i128,
    running: bool,
}

impl ReplayDriver {
    pub fn new(sensor: SensorType, trace: TraceFile) -> Result<Self, DriverError> {
        if trace.sensor_type != sensor {
            return Err(SchemaMismatch {
                expected: sensor,
                found: trace.sensor_type,
            }
            .into());
        }
        Ok(ReplayDriver {
            trace,
            cursor: 0,
            shift: 0,
            running: false,
        })
    }

    pub fn remaining(&self) -> usize {
        self.trace.records.len() - self.cursor
    }
}

impl Driver for ReplayDriver {
    fn sensor_type(&self) -> SensorType {
        self.trace.sensor_type
    }

    fn start(&mut self, at_nanos: u64) {
        self.running = true;
        if let Some(next) = self.trace.records.get(self.cursor) {
            self.shift = i128::from(at_nanos) - i128::from(next.timestamp_nanos);
        }
    }

    fn next_timestamp(&self) -> Option<u64> {
        if !self.running {
            return None;
        }
        let r = self.trace.records.get(self.cursor)?;
        Some((i128::from(r.timestamp_nanos) + self.shift) as u64)
    }

    fn produce(&mut self) -> Option<SensorSample> {
        let t = self.next_timestamp()?;
        let sample = self.trace.records[self.cursor].clone().retimed(t);
        self.cursor += 1;
        Some(sample)
    }

    fn reconfigure(&mut self, _config: &SensorConfig) {
        log::debug!("replay driver ignores reconfiguration");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drivers::{run_driver, SyntheticDriver};

    fn recorded(sensor: SensorType) -> Vec<SensorSample> {
        let cfg = SensorConfig::default_for(sensor);
        let mut d = SyntheticDriver::new(sensor, &cfg, 4).unwrap();
        run_driver(&mut d, 0, 1_000_000_000)
    }

    #[test]
    fn record_then_replay() {
        let samples = recorded(SensorType::Gyroscope);
        let trace = TraceFile::new(SensorType::Gyroscope, samples.clone()).unwrap();
        let trace = TraceFile::parse(&trace.render().unwrap()).unwrap();
        let mut d = ReplayDriver::new(SensorType::Gyroscope, trace).unwrap();
        let out = run_driver(&mut d, 7_000, u64::MAX);
        assert_eq!(out.len(), samples.len());
        for (a, b) in out.iter().zip(&samples) {
            assert_eq!(a.timestamp_nanos, b.timestamp_nanos + 7_000);
        }
    }

    #[test]
    fn wrong_sensor() {
        let trace = TraceFile::new(SensorType::Gyroscope, recorded(SensorType::Gyroscope)).unwrap();
        assert!(matches!(
            ReplayDriver::new(SensorType::Accelerometer, trace),
            Err(DriverError::SchemaMismatch(_))
        ));
    }

    #[test]
    fn out_of_order() {
        let text = format!(
            "{TRACE_MAGIC} Light\n{}\n2,0.000000002,1.000000\n1,0.000000001,1.000000\n",
            csv_header(SensorType::Light)
        );
        assert!(matches!(
            TraceFile::parse(&text),
            Err(DriverError::CorruptTrace { line: 4, .. })
        ));
    }

    #[test]
    fn bad_magic() {
        assert!(matches!(
            TraceFile::parse("hello\n"),
            Err(DriverError::CorruptTrace { line: 1, .. })
        ));
    }
}

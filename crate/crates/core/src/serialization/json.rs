use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::clock::seconds_match;
use crate::payload::*;
use crate::sample::SensorSample;
use crate::sensor::SensorType;

use super::records::{EddystoneRecord, IBeaconRecord};
use super::{ParseError, SerializationError};

struct PayloadRef<'a>(&'a Payload);

impl Serialize for PayloadRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error;
        match self.0 {
            Payload::Accelerometer(v)
            | Payload::Gravity(v)
            | Payload::LinearAcceleration(v)
            | Payload::Gyroscope(v)
            | Payload::Magnetometer(v) => v.serialize(s),
            Payload::Rotation(q) => q.serialize(s),
            Payload::Pedometer(p) => p.serialize(s),
            Payload::Altimeter(a) => a.serialize(s),
            Payload::Humidity(h) => h.serialize(s),
            Payload::Light(l) => l.serialize(s),
            Payload::AmbientTemperature(t) => t.serialize(s),
            Payload::Location(l) => l.serialize(s),
            Payload::MotionActivity(m) => m.serialize(s),
            Payload::Battery(b) => b.serialize(s),
            Payload::ScreenStatus(x) => x.serialize(s),
            Payload::Microphone(m) => m.serialize(s),
            Payload::BluetoothClassic(d) => d.serialize(s),
            Payload::IBeaconProximity(b) => IBeaconRecord::from_sighting(b)
                .ok_or_else(|| S::Error::custom("iBeacon sensor with a non-iBeacon frame"))?
                .serialize(s),
            Payload::EddystoneProximity(b) => EddystoneRecord::from_sighting(b)
                .ok_or_else(|| S::Error::custom("Eddystone sensor with a non-Eddystone frame"))?
                .serialize(s),
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonSampleOut<'a> {
    sensor_type: &'static str,
    timestamp_nanos: u64,
    relative_seconds: f64,
    data: PayloadRef<'a>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct JsonSampleIn<'a> {
    sensor_type: String,
    timestamp_nanos: u64,
    relative_seconds: f64,
    #[serde(borrow)]
    data: &'a RawValue,
}

/// Encodes a sample as a single-line JSON object.
pub fn to_json(sample: &SensorSample) -> Result<String, SerializationError> {
    sample.check_schema()?;
    let out = JsonSampleOut {
        sensor_type: sample.sensor_type.canonical_name(),
        timestamp_nanos: sample.timestamp_nanos,
        relative_seconds: sample.relative_seconds(),
        data: PayloadRef(&sample.payload),
    };
    serde_json::to_string(&out).map_err(|e| ParseError::new(1, 1, e.to_string()).into())
}

/// 1-based (line, column) of byte offset `offset` in `text`.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn json_error(err: &serde_json::Error) -> ParseError {
    ParseError::new(err.line().max(1), err.column().max(1), err.to_string())
}

fn parse_data<T: DeserializeOwned>(text: &str, raw: &RawValue) -> Result<T, ParseError> {
    serde_json::from_str::<T>(raw.get()).map_err(|e| {
        let offset = raw.get().as_ptr() as usize - text.as_ptr() as usize;
        let (line, column) = position(text, offset);
        let (line, column) = if e.line() <= 1 {
            (line, column + e.column().saturating_sub(1))
        } else {
            (line + e.line() - 1, e.column())
        };
        ParseError::new(line, column, format!("in `data`: {e}"))
    })
}

/// Parses an object produced by [`to_json`].
pub fn from_json(text: &str) -> Result<SensorSample, ParseError> {
    let raw: JsonSampleIn = serde_json::from_str(text).map_err(|e| json_error(&e))?;
    let sensor = SensorType::from_canonical_name(&raw.sensor_type).ok_or_else(|| {
        let offset = text.find(&format!("\"{}\"", raw.sensor_type)).unwrap_or(0);
        let (line, column) = position(text, offset);
        ParseError::new(
            line,
            column,
            format!("unknown sensorType `{}`", raw.sensor_type),
        )
    })?;
    if !seconds_match(raw.relative_seconds, raw.timestamp_nanos) {
        return Err(ParseError::new(
            1,
            1,
            "relativeSeconds disagrees with timestampNanos",
        ));
    }
    let ts = raw.timestamp_nanos;
    let d = raw.data;
    let payload = match sensor {
        SensorType::Accelerometer => Payload::Accelerometer(parse_data(text, d)?),
        SensorType::Gravity => Payload::Gravity(parse_data(text, d)?),
        SensorType::LinearAcceleration => Payload::LinearAcceleration(parse_data(text, d)?),
        SensorType::Gyroscope => Payload::Gyroscope(parse_data(text, d)?),
        SensorType::Rotation => Payload::Rotation(parse_data(text, d)?),
        SensorType::Magnetometer => Payload::Magnetometer(parse_data(text, d)?),
        SensorType::Pedometer => Payload::Pedometer(parse_data(text, d)?),
        SensorType::Altimeter => Payload::Altimeter(parse_data(text, d)?),
        SensorType::Humidity => Payload::Humidity(parse_data(text, d)?),
        SensorType::Light => Payload::Light(parse_data(text, d)?),
        SensorType::AmbientTemperature => Payload::AmbientTemperature(parse_data(text, d)?),
        SensorType::Location => Payload::Location(parse_data(text, d)?),
        SensorType::MotionActivity => Payload::MotionActivity(parse_data(text, d)?),
        SensorType::Battery => Payload::Battery(parse_data(text, d)?),
        SensorType::ScreenStatus => Payload::ScreenStatus(parse_data(text, d)?),
        SensorType::Microphone => Payload::Microphone(parse_data(text, d)?),
        SensorType::BluetoothClassic => Payload::BluetoothClassic(parse_data(text, d)?),
        SensorType::IBeaconProximity => {
            Payload::IBeaconProximity(parse_data::<IBeaconRecord>(text, d)?.into_sighting(ts))
        }
        SensorType::EddystoneProximity => Payload::EddystoneProximity(
            parse_data::<EddystoneRecord>(text, d)?
                .into_sighting(ts)
                .map_err(|m| ParseError::new(1, 1, m))?,
        ),
    };
    payload
        .validate_with(QUANTIZED_NORM_TOLERANCE)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    Ok(SensorSample {
        sensor_type: sensor,
        timestamp_nanos: ts,
        payload,
    })
}

use std::str::FromStr;

use crate::beacon::BeaconSighting;
use crate::clock::{format_seconds, parse_seconds};
use crate::payload::*;
use crate::sample::SensorSample;
use crate::sensor::SensorType;

use super::records::{EddystoneRecord, IBeaconRecord};
use super::{ParseError, SerializationError};

const TIME_COLUMNS: [&str; 2] = ["timestampNanos", "relativeSeconds"];

/// Payload columns, in output order.
fn payload_columns(sensor: SensorType) -> &'static [&'static str] {
    use SensorType::*;
    match sensor {
        Accelerometer | Gravity | LinearAcceleration | Gyroscope | Magnetometer => &["x", "y", "z"],
        Rotation => &["x", "y", "z", "w"],
        Pedometer => &["stepCount", "distanceMeters"],
        Altimeter => &["relativeAltitudeMeters", "pressureKPa"],
        Humidity => &["percent"],
        Light => &["lux"],
        AmbientTemperature => &["celsius"],
        Location => &[
            "latitude",
            "longitude",
            "altitudeMeters",
            "horizontalAccuracyMeters",
        ],
        MotionActivity => &["activity", "confidence"],
        Battery => &["level", "state"],
        ScreenStatus => &["status"],
        Microphone => &["frameIndex", "rmsAmplitude"],
        BluetoothClassic => &["deviceAddress", "deviceName", "rssi"],
        IBeaconProximity => &["uuid", "major", "minor", "measuredPower", "rssi"],
        EddystoneProximity => &[
            "frameType",
            "namespace",
            "instance",
            "txPower",
            "url",
            "batteryMilliVolts",
            "temperatureC",
            "advCount",
            "uptimeDeciseconds",
            "rssi",
        ],
    }
}

/// Full column list for a sensor's CSV file.
pub fn csv_columns(sensor: SensorType) -> Vec<&'static str> {
    TIME_COLUMNS
        .iter()
        .chain(payload_columns(sensor))
        .copied()
        .collect()
}

/// Header line, without the trailing newline.
pub fn csv_header(sensor: SensorType) -> String {
    csv_columns(sensor).join(",")
}

fn dec(v: f64) -> String {
    format!("{v:.6}")
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Encodes one sample as a CSV line, without the trailing newline.
pub fn csv_row(sample: &SensorSample) -> Result<String, SerializationError> {
    sample.check_schema()?;
    let mut f = vec![
        sample.timestamp_nanos.to_string(),
        format_seconds(sample.timestamp_nanos),
    ];
    match &sample.payload {
        Payload::Accelerometer(v)
        | Payload::Gravity(v)
        | Payload::LinearAcceleration(v)
        | Payload::Gyroscope(v)
        | Payload::Magnetometer(v) => f.extend([dec(v.x), dec(v.y), dec(v.z)]),
        Payload::Rotation(q) => f.extend([dec(q.x), dec(q.y), dec(q.z), dec(q.w)]),
        Payload::Pedometer(p) => f.extend([p.step_count.to_string(), dec(p.distance_meters)]),
        Payload::Altimeter(a) => f.extend([dec(a.relative_altitude_meters), dec(a.pressure_kpa)]),
        Payload::Humidity(h) => f.push(dec(h.percent)),
        Payload::Light(l) => f.push(dec(l.lux)),
        Payload::AmbientTemperature(t) => f.push(dec(t.celsius)),
        Payload::Location(l) => f.extend([
            dec(l.latitude),
            dec(l.longitude),
            dec(l.altitude_meters),
            dec(l.horizontal_accuracy_meters),
        ]),
        Payload::MotionActivity(m) => f.extend([m.activity.to_string(), m.confidence.to_string()]),
        Payload::Battery(b) => f.extend([dec(b.level), b.state.to_string()]),
        Payload::ScreenStatus(s) => f.push(s.status.to_string()),
        Payload::Microphone(m) => f.extend([m.frame_index.to_string(), dec(m.rms_amplitude)]),
        Payload::BluetoothClassic(d) => f.extend([
            d.device_address.to_string(),
            quoted(&d.device_name),
            d.rssi.to_string(),
        ]),
        Payload::IBeaconProximity(s) => {
            let r = IBeaconRecord::from_sighting(s).ok_or_else(|| mismatch(sample))?;
            f.extend([
                r.uuid.hyphenated().to_string(),
                r.major.to_string(),
                r.minor.to_string(),
                r.measured_power.to_string(),
                r.rssi.to_string(),
            ]);
        }
        Payload::EddystoneProximity(s) => {
            let r = EddystoneRecord::from_sighting(s).ok_or_else(|| mismatch(sample))?;
            f.extend([
                r.frame_type,
                opt(r.namespace),
                opt(r.instance),
                opt(r.tx_power),
                r.url.as_deref().map(quoted).unwrap_or_default(),
                opt(r.battery_milli_volts),
                r.temperature_c.map(dec).unwrap_or_default(),
                opt(r.adv_count),
                opt(r.uptime_deciseconds),
                r.rssi.to_string(),
            ]);
        }
    }
    Ok(f.join(","))
}

fn mismatch(sample: &SensorSample) -> SerializationError {
    SerializationError::Parse(ParseError::new(
        1,
        1,
        format!(
            "{} sighting carries the wrong beacon protocol",
            sample.sensor_type
        ),
    ))
}

struct Field {
    column: usize,
    text: String,
    quoted: bool,
}

/// Splits one line into fields, honouring double-quoted fields with `""`
/// escapes. Columns are 1-based character positions of each field start.
fn split_line(line: &str) -> Result<Vec<Field>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut fields = Vec::new();
    let mut i = 0;
    loop {
        let start = i;
        let mut text = String::new();
        let mut quoted = false;
        if chars.get(i) == Some(&'"') {
            quoted = true;
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(ParseError::new(1, start + 1, "unterminated quoted field")),
                    Some('"') if chars.get(i + 1) == Some(&'"') => {
                        text.push('"');
                        i += 2;
                    }
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some(c) => {
                        text.push(*c);
                        i += 1;
                    }
                }
            }
            if !matches!(chars.get(i), None | Some(',')) {
                return Err(ParseError::new(1, i + 1, "expected `,` after quoted field"));
            }
        } else {
            while let Some(&c) = chars.get(i) {
                if c == ',' {
                    break;
                }
                if c == '"' {
                    return Err(ParseError::new(1, i + 1, "stray quote in unquoted field"));
                }
                text.push(c);
                i += 1;
            }
        }
        fields.push(Field {
            column: start + 1,
            text,
            quoted,
        });
        if i >= chars.len() {
            break;
        }
        // skip the comma
        i += 1;
    }
    Ok(fields)
}

struct Cursor<'a> {
    fields: &'a [Field],
    names: Vec<&'static str>,
    idx: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> (&'a Field, &'static str) {
        let f = &self.fields[self.idx];
        let name = self.names[self.idx];
        self.idx += 1;
        (f, name)
    }

    fn parse<T: FromStr>(&mut self) -> Result<T, ParseError>
    where
        T::Err: std::fmt::Display,
    {
        let (f, name) = self.next();
        if f.quoted {
            return Err(ParseError::new(
                1,
                f.column,
                format!("`{name}` must not be quoted"),
            ));
        }
        f.text.parse::<T>().map_err(|e| {
            ParseError::new(1, f.column, format!("bad `{name}` value {:?}: {e}", f.text))
        })
    }

    fn float(&mut self) -> Result<f64, ParseError> {
        let column = self.fields[self.idx].column;
        let v: f64 = self.parse()?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ParseError::new(1, column, "non-finite number"))
        }
    }

    fn text(&mut self) -> Result<String, ParseError> {
        let (f, _) = self.next();
        Ok(f.text.clone())
    }

    fn optional<T: FromStr>(&mut self) -> Result<Option<T>, ParseError>
    where
        T::Err: std::fmt::Display,
    {
        if self.fields[self.idx].text.is_empty() && !self.fields[self.idx].quoted {
            self.idx += 1;
            Ok(None)
        } else {
            self.parse().map(Some)
        }
    }

    fn optional_text(&mut self) -> Option<String> {
        let f = &self.fields[self.idx];
        self.idx += 1;
        (f.quoted || !f.text.is_empty()).then(|| f.text.clone())
    }
}

/// Parses a line produced by [`csv_row`] back into a sample. Errors report
/// line 1; file readers re-base them.
pub fn parse_csv_row(sensor: SensorType, line: &str) -> Result<SensorSample, ParseError> {
    let fields = split_line(line)?;
    let names = csv_columns(sensor);
    if fields.len() != names.len() {
        let column = line.chars().count() + 1;
        return Err(ParseError::new(
            1,
            column,
            format!(
                "expected {} columns for {sensor}, found {}",
                names.len(),
                fields.len()
            ),
        ));
    }
    let mut c = Cursor {
        fields: &fields,
        names,
        idx: 0,
    };
    let timestamp: u64 = c.parse()?;
    let rel_col = fields[1].column;
    let (rel, _) = c.next();
    if rel.quoted || parse_seconds(&rel.text) != Some(timestamp) {
        return Err(ParseError::new(
            1,
            rel_col,
            "relativeSeconds disagrees with timestampNanos",
        ));
    }
    let payload_col = fields.get(2).map_or(1, |f| f.column);

    let vec3 = |c: &mut Cursor| -> Result<Vector3, ParseError> {
        Ok(Vector3::new(c.float()?, c.float()?, c.float()?))
    };
    let payload = match sensor {
        SensorType::Accelerometer => Payload::Accelerometer(vec3(&mut c)?),
        SensorType::Gravity => Payload::Gravity(vec3(&mut c)?),
        SensorType::LinearAcceleration => Payload::LinearAcceleration(vec3(&mut c)?),
        SensorType::Gyroscope => Payload::Gyroscope(vec3(&mut c)?),
        SensorType::Magnetometer => Payload::Magnetometer(vec3(&mut c)?),
        SensorType::Rotation => Payload::Rotation(Quaternion {
            x: c.float()?,
            y: c.float()?,
            z: c.float()?,
            w: c.float()?,
        }),
        SensorType::Pedometer => Payload::Pedometer(PedometerData {
            step_count: c.parse()?,
            distance_meters: c.float()?,
        }),
        SensorType::Altimeter => Payload::Altimeter(AltimeterData {
            relative_altitude_meters: c.float()?,
            pressure_kpa: c.float()?,
        }),
        SensorType::Humidity => Payload::Humidity(HumidityData {
            percent: c.float()?,
        }),
        SensorType::Light => Payload::Light(LightData { lux: c.float()? }),
        SensorType::AmbientTemperature => Payload::AmbientTemperature(TemperatureData {
            celsius: c.float()?,
        }),
        SensorType::Location => Payload::Location(LocationData {
            latitude: c.float()?,
            longitude: c.float()?,
            altitude_meters: c.float()?,
            horizontal_accuracy_meters: c.float()?,
        }),
        SensorType::MotionActivity => Payload::MotionActivity(MotionActivityData {
            activity: c.parse()?,
            confidence: c.parse()?,
        }),
        SensorType::Battery => Payload::Battery(BatteryData {
            level: c.float()?,
            state: c.parse()?,
        }),
        SensorType::ScreenStatus => Payload::ScreenStatus(ScreenStatusData { status: c.parse()? }),
        SensorType::Microphone => Payload::Microphone(MicrophoneData {
            frame_index: c.parse()?,
            rms_amplitude: c.float()?,
        }),
        SensorType::BluetoothClassic => Payload::BluetoothClassic(BluetoothDevice {
            device_address: c.parse()?,
            device_name: c.text()?,
            rssi: c.parse()?,
        }),
        SensorType::IBeaconProximity => {
            let record = IBeaconRecord {
                uuid: c.parse()?,
                major: c.parse()?,
                minor: c.parse()?,
                measured_power: c.parse()?,
                rssi: c.parse()?,
            };
            Payload::IBeaconProximity(record.into_sighting(timestamp))
        }
        SensorType::EddystoneProximity => {
            let record = EddystoneRecord {
                frame_type: c.text()?,
                namespace: c.optional_text(),
                instance: c.optional_text(),
                tx_power: c.optional()?,
                url: c.optional_text(),
                battery_milli_volts: c.optional()?,
                temperature_c: c.optional()?,
                adv_count: c.optional()?,
                uptime_deciseconds: c.optional()?,
                rssi: c.parse()?,
            };
            let sighting: BeaconSighting = record
                .into_sighting(timestamp)
                .map_err(|m| ParseError::new(1, payload_col, m))?;
            Payload::EddystoneProximity(sighting)
        }
    };
    payload
        .validate_with(QUANTIZED_NORM_TOLERANCE)
        .map_err(|e| ParseError::new(1, payload_col, e.to_string()))?;
    Ok(SensorSample {
        sensor_type: sensor,
        timestamp_nanos: timestamp,
        payload,
    })
}

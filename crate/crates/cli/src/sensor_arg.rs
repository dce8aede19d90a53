//! `--sensor name[@rate][:key=value,...]`

use sensekit_core::beacon::{
    BeaconFrame, EddystoneFrame, EddystoneUid, EddystoneUrl, IBeaconFrame,
};
use sensekit_core::config::{AccuracyMode, BeaconRole};
use sensekit_core::{SensorConfig, SensorType};

use crate::error::CliError;

fn sensor_name(name: &str) -> Option<SensorType> {
    match name.to_ascii_lowercase().as_str() {
        "ibeacon" => Some(SensorType::IBeaconProximity),
        "eddystone" => Some(SensorType::EddystoneProximity),
        "bluetooth" => Some(SensorType::BluetoothClassic),
        "temperature" => Some(SensorType::AmbientTemperature),
        _ => SensorType::from_loose_name(name),
    }
}

fn parse_rate(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let t = t
        .strip_suffix("Hz")
        .or_else(|| t.strip_suffix("hz"))
        .unwrap_or(t);
    t.parse::<f64>().map_err(|_| format!("bad rate `{text}`"))
}

fn parse_accuracy(v: &str) -> Result<AccuracyMode, String> {
    match v.to_ascii_lowercase().as_str() {
        "best" => Ok(AccuracyMode::Best),
        "balanced" => Ok(AccuracyMode::Balanced),
        "low-power" | "lowpower" | "low" => Ok(AccuracyMode::LowPower),
        _ => Err(format!("unknown accuracy `{v}`")),
    }
}

fn parse_roles(v: &str) -> Result<Vec<BeaconRole>, String> {
    v.split('+')
        .map(|r| match r.to_ascii_lowercase().as_str() {
            "scan" => Ok(BeaconRole::Scan),
            "broadcast" => Ok(BeaconRole::Broadcast),
            _ => Err(format!("unknown role `{r}`")),
        })
        .collect()
}

fn hex_array<const N: usize>(key: &str, v: &str) -> Result<[u8; N], String> {
    let bytes = hex::decode(v).map_err(|e| format!("{key}: {e}"))?;
    bytes
        .try_into()
        .map_err(|_| format!("{key} must be {N} bytes"))
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("bad {key} `{v}`"))
}

#[derive(Default)]
struct Identity {
    uuid: Option<uuid::Uuid>,
    major: u16,
    minor: u16,
    power: Option<i8>,
    namespace: Option<[u8; 10]>,
    instance: Option<[u8; 6]>,
    url: Option<String>,
}

impl Identity {
    fn is_empty(&self) -> bool {
        self.uuid.is_none() && self.namespace.is_none() && self.url.is_none()
    }

    fn frame(self, sensor: SensorType) -> Result<Option<BeaconFrame>, String> {
        if self.is_empty() {
            return Ok(None);
        }
        match sensor {
            SensorType::IBeaconProximity => {
                let uuid = self.uuid.ok_or("iBeacon identity needs uuid=")?;
                Ok(Some(BeaconFrame::IBeacon(IBeaconFrame {
                    uuid,
                    major: self.major,
                    minor: self.minor,
                    measured_power: self.power.unwrap_or(-59),
                })))
            }
            SensorType::EddystoneProximity => {
                let tx = self.power.unwrap_or(-20);
                let frame = match (self.url, self.namespace) {
                    (Some(url), None) => EddystoneFrame::Url(EddystoneUrl {
                        tx_power_at_0m: tx,
                        url,
                    }),
                    (None, Some(namespace)) => EddystoneFrame::Uid(EddystoneUid {
                        tx_power_at_0m: tx,
                        namespace,
                        instance: self.instance.unwrap_or_default(),
                    }),
                    _ => return Err("give either url= or namespace=, not both".into()),
                };
                Ok(Some(BeaconFrame::Eddystone(frame)))
            }
            _ => Err(format!("{sensor} takes no beacon identity")),
        }
    }
}

/// Parses one `--sensor` argument into a configuration. Values not given
/// keep the sensor's defaults.
pub fn parse_sensor_arg(arg: &str) -> Result<SensorConfig, CliError> {
    let err = |m: String| CliError::usage(format!("--sensor `{arg}`: {m}"));
    let (head, opts) = arg.split_once(':').unwrap_or((arg, ""));
    let (name, rate) = match head.split_once('@') {
        Some((n, r)) => (n, Some(parse_rate(r).map_err(err)?)),
        None => (head, None),
    };
    let sensor = sensor_name(name.trim()).ok_or_else(|| err(format!("unknown sensor `{name}`")))?;
    let mut cfg = SensorConfig::default_for(sensor);
    if let Some(r) = rate {
        cfg.sample_rate_hz = Some(r);
    }
    let mut id = Identity::default();
    for opt in opts.split(',').filter(|o| !o.is_empty()) {
        let (k, v) = opt
            .split_once('=')
            .ok_or_else(|| err(format!("option `{opt}` is not key=value")))?;
        let v = v.trim();
        match k.trim() {
            "accuracy" => cfg.accuracy = Some(parse_accuracy(v).map_err(err)?),
            "roles" => cfg.roles = parse_roles(v).map_err(err)?.into_iter().collect(),
            "uuid" => id.uuid = Some(v.parse().map_err(|_| err(format!("bad uuid `{v}`")))?),
            "major" => id.major = num("major", v).map_err(err)?,
            "minor" => id.minor = num("minor", v).map_err(err)?,
            "power" | "tx" => id.power = Some(num("power", v).map_err(err)?),
            "namespace" => id.namespace = Some(hex_array("namespace", v).map_err(err)?),
            "instance" => id.instance = Some(hex_array("instance", v).map_err(err)?),
            "url" => id.url = Some(v.to_owned()),
            other => return Err(err(format!("unknown option `{other}`"))),
        }
    }
    if let Some(frame) = id.frame(sensor).map_err(err)? {
        cfg.beacon_identity = Some(frame);
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_rate() {
        let c = parse_sensor_arg("accelerometer@50").unwrap();
        assert_eq!(c.sensor_type, SensorType::Accelerometer);
        assert_eq!(c.sample_rate_hz, Some(50.0));
        let c = parse_sensor_arg("Gyroscope@100Hz").unwrap();
        assert_eq!(c.sample_rate_hz, Some(100.0));
        assert_eq!(parse_sensor_arg("battery").unwrap().sample_rate_hz, None);
    }

    #[test]
    fn options() {
        let c = parse_sensor_arg("location:accuracy=low-power").unwrap();
        assert_eq!(c.accuracy, Some(AccuracyMode::LowPower));
        let c = parse_sensor_arg(
            "ibeacon:roles=scan+broadcast,uuid=f7826da6-4fa2-4e98-8024-bc5b71e0893e,major=3,minor=4",
        )
        .unwrap();
        assert!(c.broadcasts() && c.scans());
        assert!(c.validate().is_ok());
        let c = parse_sensor_arg("eddystone:roles=broadcast,url=https://example.com").unwrap();
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects() {
        for bad in [
            "nosuch",
            "light@fast",
            "location:accuracy=great",
            "light:foo=1",
            "light:x",
        ] {
            assert_eq!(parse_sensor_arg(bad).unwrap_err().code, 2, "{bad}");
        }
    }
}

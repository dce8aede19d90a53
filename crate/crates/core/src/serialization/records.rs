//! Flat record forms of beacon sightings, shared by the CSV and JSON codecs.

use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::beacon::{
    BeaconFrame, BeaconSighting, EddystoneFrame, EddystoneTlm, EddystoneUid, EddystoneUrl, Fixed88,
    IBeaconFrame,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub(crate) struct IBeaconRecord {
    pub uuid: Uuid,
    pub major: u16,
    pub minor: u16,
    pub measured_power: i8,
    pub rssi: i8,
}

impl IBeaconRecord {
    pub fn from_sighting(s: &BeaconSighting) -> Option<Self> {
        let BeaconFrame::IBeacon(f) = &s.frame else {
            return None;
        };
        Some(IBeaconRecord {
            uuid: f.uuid,
            major: f.major,
            minor: f.minor,
            measured_power: f.measured_power,
            rssi: s.rssi,
        })
    }

    pub fn into_sighting(self, timestamp_nanos: u64) -> BeaconSighting {
        BeaconSighting {
            frame: BeaconFrame::IBeacon(IBeaconFrame {
                uuid: self.uuid,
                major: self.major,
                minor: self.minor,
                measured_power: self.measured_power,
            }),
            rssi: self.rssi,
            timestamp_nanos,
        }
    }
}

/// Eddystone sighting with the union of all frame fields; only those of
/// `frame_type` are present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub(crate) struct EddystoneRecord {
    pub frame_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub namespace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_power: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery_milli_volts: Option<u16>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adv_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uptime_deciseconds: Option<u32>,
    pub rssi: i8,
}

impl EddystoneRecord {
    pub fn from_sighting(s: &BeaconSighting) -> Option<Self> {
        let BeaconFrame::Eddystone(frame) = &s.frame else {
            return None;
        };
        let mut r = EddystoneRecord {
            frame_type: frame.kind().to_owned(),
            rssi: s.rssi,
            ..Default::default()
        };
        match frame {
            EddystoneFrame::Uid(u) => {
                r.namespace = Some(hex::encode(u.namespace));
                r.instance = Some(hex::encode(u.instance));
                r.tx_power = Some(u.tx_power_at_0m);
            }
            EddystoneFrame::Url(u) => {
                r.tx_power = Some(u.tx_power_at_0m);
                r.url = Some(u.url.clone());
            }
            EddystoneFrame::Tlm(t) => {
                r.battery_milli_volts = Some(t.battery_millivolts);
                r.temperature_c = Some(t.temperature.to_f64());
                r.adv_count = Some(t.adv_count);
                r.uptime_deciseconds = Some(t.uptime_deciseconds);
            }
        }
        Some(r)
    }

    pub fn into_sighting(self, timestamp_nanos: u64) -> Result<BeaconSighting, String> {
        fn need<T>(v: Option<T>, name: &str) -> Result<T, String> {
            v.ok_or_else(|| format!("missing `{name}`"))
        }
        fn none<T>(v: &Option<T>, name: &str, kind: &str) -> Result<(), String> {
            match v {
                Some(_) => Err(format!("`{name}` does not belong to a {kind} frame")),
                None => Ok(()),
            }
        }
        fn hex_exact<const N: usize>(text: &str, name: &str) -> Result<[u8; N], String> {
            let mut out = [0u8; N];
            hex::decode_to_slice(text, &mut out).map_err(|e| format!("bad `{name}` hex: {e}"))?;
            Ok(out)
        }

        let kind = self.frame_type.as_str();
        let frame = match kind {
            "uid" => {
                none(&self.url, "url", kind)?;
                none(&self.battery_milli_volts, "batteryMilliVolts", kind)?;
                none(&self.temperature_c, "temperatureC", kind)?;
                none(&self.adv_count, "advCount", kind)?;
                none(&self.uptime_deciseconds, "uptimeDeciseconds", kind)?;
                EddystoneFrame::Uid(EddystoneUid {
                    tx_power_at_0m: need(self.tx_power, "txPower")?,
                    namespace: hex_exact(&need(self.namespace, "namespace")?, "namespace")?,
                    instance: hex_exact(&need(self.instance, "instance")?, "instance")?,
                })
            }
            "url" => {
                none(&self.namespace, "namespace", kind)?;
                none(&self.instance, "instance", kind)?;
                none(&self.battery_milli_volts, "batteryMilliVolts", kind)?;
                none(&self.temperature_c, "temperatureC", kind)?;
                none(&self.adv_count, "advCount", kind)?;
                none(&self.uptime_deciseconds, "uptimeDeciseconds", kind)?;
                EddystoneFrame::Url(EddystoneUrl {
                    tx_power_at_0m: need(self.tx_power, "txPower")?,
                    url: need(self.url, "url")?,
                })
            }
            "tlm" => {
                none(&self.namespace, "namespace", kind)?;
                none(&self.instance, "instance", kind)?;
                none(&self.tx_power, "txPower", kind)?;
                none(&self.url, "url", kind)?;
                let celsius = need(self.temperature_c, "temperatureC")?;
                EddystoneFrame::Tlm(EddystoneTlm {
                    battery_millivolts: need(self.battery_milli_volts, "batteryMilliVolts")?,
                    temperature: Fixed88::from_f64(celsius)
                        .ok_or_else(|| format!("temperature {celsius} out of range"))?,
                    adv_count: need(self.adv_count, "advCount")?,
                    uptime_deciseconds: need(self.uptime_deciseconds, "uptimeDeciseconds")?,
                })
            }
            other => return Err(format!("unknown Eddystone frame type `{other}`")),
        };
        Ok(BeaconSighting {
            frame: BeaconFrame::Eddystone(frame),
            rssi: self.rssi,
            timestamp_nanos,
        })
    }
}

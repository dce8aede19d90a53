use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BeaconError;

/// 16-bit service UUID Eddystone frames are advertised under.
pub const EDDYSTONE_SERVICE_UUID: u16 = 0xFEAA;

/// Scheme byte plus encoded body.
pub const MAX_ENCODED_URL_LEN: usize = 18;

const FRAME_UID: u8 = 0x00;
const FRAME_URL: u8 = 0x10;
const FRAME_TLM: u8 = 0x20;

const UID_LEN: usize = 18;
const UID_LEN_WITH_RFU: usize = 20;
const TLM_LEN: usize = 14;

const URL_SCHEMES: [&str; 4] = ["http://www.", "https://www.", "http://", "https://"];

const URL_EXPANSIONS: [&str; 14] = [
    ".com/", ".org/", ".edu/", ".net/", ".info/", ".biz/", ".gov/", ".com", ".org", ".edu", ".net",
    ".info", ".biz", ".gov",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EddystoneUid {
    pub tx_power_at_0m: i8,
    #[serde(with = "super::hex_array")]
    pub namespace: [u8; 10],
    #[serde(with = "super::hex_array")]
    pub instance: [u8; 6],
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EddystoneUrl {
    pub tx_power_at_0m: i8,
    pub url: String,
}

/// Signed 8.8 fixed-point value, as used for the TLM beacon temperature.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Fixed88(pub i16);

impl Fixed88 {
    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 256.0
    }

    /// Nearest representable value; `None` outside [-128, 128).
    pub fn from_f64(value: f64) -> Option<Self> {
        let raw = (value * 256.0).round();
        (raw >= f64::from(i16::MIN) && raw <= f64::from(i16::MAX)).then_some(Fixed88(raw as i16))
    }
}

impl Serialize for Fixed88 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

impl<'de> Deserialize<'de> for Fixed88 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Fixed88::from_f64(v).ok_or_else(|| serde::de::Error::custom("temperature out of range"))
    }
}

/// Unencrypted telemetry (version 0x00).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EddystoneTlm {
    pub battery_millivolts: u16,
    pub temperature: Fixed88,
    pub adv_count: u32,
    pub uptime_deciseconds: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "frameType", rename_all = "lowercase")]
pub enum EddystoneFrame {
    Uid(EddystoneUid),
    Url(EddystoneUrl),
    Tlm(EddystoneTlm),
}

impl EddystoneFrame {
    pub fn tx_power_at_0m(&self) -> Option<i8> {
        match self {
            EddystoneFrame::Uid(u) => Some(u.tx_power_at_0m),
            EddystoneFrame::Url(u) => Some(u.tx_power_at_0m),
            EddystoneFrame::Tlm(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EddystoneFrame::Uid(_) => "uid",
            EddystoneFrame::Url(_) => "url",
            EddystoneFrame::Tlm(_) => "tlm",
        }
    }
}

/// Compresses a URL into the scheme byte followed by the encoded body.
pub fn encode_url(url: &str) -> Result<Vec<u8>, BeaconError> {
    let (scheme, rest) = URL_SCHEMES
        .iter()
        .enumerate()
        .filter(|(_, p)| url.starts_with(*p))
        .max_by_key(|(_, p)| p.len())
        .map(|(i, p)| (i as u8, &url[p.len()..]))
        .ok_or_else(|| BeaconError::InvalidUrl(format!("no supported scheme in `{url}`")))?;

    let mut out = vec![scheme];
    let mut rest = rest;
    while !rest.is_empty() {
        let expansion = URL_EXPANSIONS
            .iter()
            .enumerate()
            .filter(|(_, e)| rest.starts_with(*e))
            .max_by_key(|(_, e)| e.len());
        if let Some((code, text)) = expansion {
            out.push(code as u8);
            rest = &rest[text.len()..];
            continue;
        }
        let c = rest.as_bytes()[0];
        if !(0x21..=0x7E).contains(&c) {
            return Err(BeaconError::InvalidUrl(format!(
                "character {:?} cannot be encoded",
                rest.chars().next().unwrap_or_default()
            )));
        }
        out.push(c);
        rest = &rest[1..];
    }
    if out.len() > MAX_ENCODED_URL_LEN {
        return Err(BeaconError::UrlTooLong(out.len()));
    }
    Ok(out)
}

fn decode_url(bytes: &[u8]) -> Result<String, BeaconError> {
    let (&scheme, body) = bytes.split_first().ok_or(BeaconError::BadLength {
        expected: "URL frame with a scheme byte",
        actual: 2,
    })?;
    let mut url = URL_SCHEMES
        .get(usize::from(scheme))
        .ok_or_else(|| BeaconError::InvalidUrl(format!("unknown scheme code 0x{scheme:02X}")))?
        .to_string();
    for &b in body {
        match b {
            0x00..=0x0D => url.push_str(URL_EXPANSIONS[usize::from(b)]),
            0x21..=0x7E => url.push(char::from(b)),
            _ => return Err(BeaconError::InvalidUrl(format!("reserved byte 0x{b:02X}"))),
        }
    }
    Ok(url)
}

/// Encodes the service data carried under UUID 0xFEAA, starting at the
/// frame-type byte. UID frames include the two reserved trailing bytes.
pub fn encode_eddystone(frame: &EddystoneFrame) -> Result<Vec<u8>, BeaconError> {
    let mut out = Vec::with_capacity(UID_LEN_WITH_RFU);
    match frame {
        EddystoneFrame::Uid(uid) => {
            out.push(FRAME_UID);
            out.push(uid.tx_power_at_0m as u8);
            out.extend_from_slice(&uid.namespace);
            out.extend_from_slice(&uid.instance);
            out.extend_from_slice(&[0, 0]);
        }
        EddystoneFrame::Url(url) => {
            out.push(FRAME_URL);
            out.push(url.tx_power_at_0m as u8);
            out.extend(encode_url(&url.url)?);
        }
        EddystoneFrame::Tlm(tlm) => {
            out.push(FRAME_TLM);
            out.push(0x00);
            out.extend_from_slice(&tlm.battery_millivolts.to_be_bytes());
            out.extend_from_slice(&tlm.temperature.0.to_be_bytes());
            out.extend_from_slice(&tlm.adv_count.to_be_bytes());
            out.extend_from_slice(&tlm.uptime_deciseconds.to_be_bytes());
        }
    }
    Ok(out)
}

pub fn decode_eddystone(bytes: &[u8]) -> Result<EddystoneFrame, BeaconError> {
    let Some(&frame_type) = bytes.first() else {
        return Err(BeaconError::BadLength {
            expected: "at least 1",
            actual: 0,
        });
    };
    match frame_type {
        FRAME_UID => {
            if bytes.len() != UID_LEN && bytes.len() != UID_LEN_WITH_RFU {
                return Err(BeaconError::BadLength {
                    expected: "18 or 20 (UID)",
                    actual: bytes.len(),
                });
            }
            let mut namespace = [0u8; 10];
            namespace.copy_from_slice(&bytes[2..12]);
            let mut instance = [0u8; 6];
            instance.copy_from_slice(&bytes[12..18]);
            Ok(EddystoneFrame::Uid(EddystoneUid {
                tx_power_at_0m: bytes[1] as i8,
                namespace,
                instance,
            }))
        }
        FRAME_URL => {
            if bytes.len() < 3 || bytes.len() > 2 + MAX_ENCODED_URL_LEN {
                return Err(BeaconError::BadLength {
                    expected: "3..=20 (URL)",
                    actual: bytes.len(),
                });
            }
            Ok(EddystoneFrame::Url(EddystoneUrl {
                tx_power_at_0m: bytes[1] as i8,
                url: decode_url(&bytes[2..])?,
            }))
        }
        FRAME_TLM => {
            if bytes.len() != TLM_LEN {
                return Err(BeaconError::BadLength {
                    expected: "14 (TLM)",
                    actual: bytes.len(),
                });
            }
            if bytes[1] != 0x00 {
                return Err(BeaconError::BadTlmVersion(bytes[1]));
            }
            let be32 =
                |i: usize| u32::from_be_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);
            Ok(EddystoneFrame::Tlm(EddystoneTlm {
                battery_millivolts: u16::from_be_bytes([bytes[2], bytes[3]]),
                temperature: Fixed88(i16::from_be_bytes([bytes[4], bytes[5]])),
                adv_count: be32(6),
                uptime_deciseconds: be32(10),
            }))
        }
        other => Err(BeaconError::UnknownFrameType(other)),
    }
}

//! BLE beacon support: iBeacon and Eddystone advertisement codecs,
//! RSSI-based distance estimation, proximity zones and 1 Hz ranging.

mod distance;
mod eddystone;
mod ibeacon;
mod ranging;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use distance::{
    estimate_distance, proximity_zone, PathLossModel, ProximityEstimate, ProximityZone,
    ZoneThresholds, DEFAULT_PATH_LOSS_EXPONENT, EDDYSTONE_0M_TO_1M_DB,
};
pub use eddystone::{
    decode_eddystone, encode_eddystone, encode_url, EddystoneFrame, EddystoneTlm, EddystoneUid,
    EddystoneUrl, Fixed88, EDDYSTONE_SERVICE_UUID, MAX_ENCODED_URL_LEN,
};
pub use ibeacon::{decode_ibeacon, encode_ibeacon, IBeaconFrame, APPLE_COMPANY_ID, IBEACON_AD_LEN};
pub use ranging::{
    range_beacons, RangedBeacon, Ranger, RangingConfig, RangingWindow, RssiAggregation,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BeaconError {
    #[error("BadLength: expected {expected}, got {actual} bytes")]
    BadLength {
        expected: &'static str,
        actual: usize,
    },
    #[error("BadAdType: expected 0x{expected:02X}, got 0x{actual:02X}")]
    BadAdType { expected: u8, actual: u8 },
    #[error("BadCompanyId: 0x{0:04X} is not Apple's")]
    BadCompanyId(u16),
    #[error("BadBeaconType: 0x{0:02X}{1:02X} is not an iBeacon")]
    BadBeaconType(u8, u8),
    #[error("UnknownFrameType: 0x{0:02X}")]
    UnknownFrameType(u8),
    #[error("BadTlmVersion: 0x{0:02X}")]
    BadTlmVersion(u8),
    #[error("UrlTooLong: {0} encoded bytes, at most 18 allowed")]
    UrlTooLong(usize),
    #[error("InvalidUrl: {0}")]
    InvalidUrl(String),
    #[error("InvalidExponent: path-loss exponent must be positive, got {0}")]
    InvalidExponent(f64),
    #[error("RssiOutOfRange: {0} dBm outside [-120, 0]")]
    RssiOutOfRange(i16),
    #[error("BadHex: {0}")]
    BadHex(String),
}

impl BeaconError {
    /// Variant name, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            BeaconError::BadLength { .. } => "BadLength",
            BeaconError::BadAdType { .. } => "BadAdType",
            BeaconError::BadCompanyId(_) => "BadCompanyId",
            BeaconError::BadBeaconType(..) => "BadBeaconType",
            BeaconError::UnknownFrameType(_) => "UnknownFrameType",
            BeaconError::BadTlmVersion(_) => "BadTlmVersion",
            BeaconError::UrlTooLong(_) => "UrlTooLong",
            BeaconError::InvalidUrl(_) => "InvalidUrl",
            BeaconError::InvalidExponent(_) => "InvalidExponent",
            BeaconError::RssiOutOfRange(_) => "RssiOutOfRange",
            BeaconError::BadHex(_) => "BadHex",
        }
    }
}

/// A decoded advertisement from either protocol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BeaconFrame {
    IBeacon(IBeaconFrame),
    Eddystone(EddystoneFrame),
}

impl BeaconFrame {
    /// Expected RSSI at one metre, when the frame carries a power level.
    pub fn reference_power(&self) -> Option<f64> {
        match self {
            BeaconFrame::IBeacon(f) => Some(f64::from(f.measured_power)),
            BeaconFrame::Eddystone(f) => f
                .tx_power_at_0m()
                .map(|tx| f64::from(tx) - EDDYSTONE_0M_TO_1M_DB),
        }
    }

    /// Grouping key for ranging; telemetry frames identify nothing.
    pub fn identity(&self) -> Option<BeaconId> {
        match self {
            BeaconFrame::IBeacon(f) => Some(BeaconId::IBeacon {
                uuid: f.uuid,
                major: f.major,
                minor: f.minor,
            }),
            BeaconFrame::Eddystone(EddystoneFrame::Uid(u)) => Some(BeaconId::EddystoneUid {
                namespace: u.namespace,
                instance: u.instance,
            }),
            BeaconFrame::Eddystone(EddystoneFrame::Url(u)) => {
                Some(BeaconId::EddystoneUrl(u.url.clone()))
            }
            BeaconFrame::Eddystone(EddystoneFrame::Tlm(_)) => None,
        }
    }
}

/// Identity a beacon is ranged under.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BeaconId {
    IBeacon {
        uuid: uuid::Uuid,
        major: u16,
        minor: u16,
    },
    EddystoneUid {
        namespace: [u8; 10],
        instance: [u8; 6],
    },
    EddystoneUrl(String),
}

impl fmt::Display for BeaconId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeaconId::IBeacon { uuid, major, minor } => {
                write!(f, "ibeacon {}/{}/{}", uuid.hyphenated(), major, minor)
            }
            BeaconId::EddystoneUid {
                namespace,
                instance,
            } => write!(
                f,
                "eddystone-uid {}/{}",
                hex::encode(namespace),
                hex::encode(instance)
            ),
            BeaconId::EddystoneUrl(url) => write!(f, "eddystone-url {url}"),
        }
    }
}

/// One received advertisement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeaconSighting {
    pub frame: BeaconFrame,
    pub rssi: i8,
    pub timestamp_nanos: u64,
}

impl BeaconSighting {
    pub const MIN_RSSI: i8 = -120;
    pub const MAX_RSSI: i8 = 0;

    pub fn new(frame: BeaconFrame, rssi: i8, timestamp_nanos: u64) -> Result<Self, BeaconError> {
        if !(Self::MIN_RSSI..=Self::MAX_RSSI).contains(&rssi) {
            return Err(BeaconError::RssiOutOfRange(i16::from(rssi)));
        }
        Ok(BeaconSighting {
            frame,
            rssi,
            timestamp_nanos,
        })
    }
}

/// Parses whitespace-insensitive hex.
pub fn parse_hex(text: &str) -> Result<Vec<u8>, BeaconError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    hex::decode(&compact).map_err(|e| BeaconError::BadHex(e.to_string()))
}

/// Decodes an advertisement of either protocol.
///
/// Accepts the 27-byte iBeacon manufacturer-data AD structure, a complete
/// Eddystone service-data AD structure (`len 0x16 0xAA 0xFE ...`), or the
/// bare Eddystone service data starting at the frame-type byte.
pub fn decode_advertisement(bytes: &[u8]) -> Result<BeaconFrame, BeaconError> {
    if bytes.len() >= 2 && bytes[1] == 0xFF {
        return decode_ibeacon(bytes).map(BeaconFrame::IBeacon);
    }
    if bytes.len() >= 4 && bytes[1] == 0x16 && bytes[2..4] == EDDYSTONE_SERVICE_UUID.to_le_bytes() {
        if usize::from(bytes[0]) != bytes.len() - 1 {
            return Err(BeaconError::BadLength {
                expected: "AD length byte to match the structure",
                actual: bytes.len(),
            });
        }
        return decode_eddystone(&bytes[4..]).map(BeaconFrame::Eddystone);
    }
    decode_eddystone(bytes).map(BeaconFrame::Eddystone)
}

pub(crate) mod hex_array {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(
        bytes: &[u8; N],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(
        d: D,
    ) -> Result<[u8; N], D::Error> {
        let text = String::deserialize(d)?;
        let mut out = [0u8; N];
        hex::decode_to_slice(&text, &mut out).map_err(D::Error::custom)?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use uuid::Uuid;

    #[test]
    fn hex_ignores_whitespace() {
        assert_eq!(
            parse_hex(" 1a ff\n4C 00 ").unwrap(),
            vec![0x1A, 0xFF, 0x4C, 0x00]
        );
        assert!(matches!(parse_hex("zz"), Err(BeaconError::BadHex(_))));
        assert!(matches!(parse_hex("abc"), Err(BeaconError::BadHex(_))));
    }

    #[test]
    fn auto_detect() {
        let ib = IBeaconFrame {
            uuid: Uuid::from_u128(0x1234),
            major: 7,
            minor: 8,
            measured_power: -60,
        };
        let bytes = encode_ibeacon(&ib);
        assert_eq!(
            decode_advertisement(&bytes).unwrap(),
            BeaconFrame::IBeacon(ib)
        );

        let url = EddystoneFrame::Url(EddystoneUrl {
            tx_power_at_0m: -10,
            url: "https://example.org/".into(),
        });
        let service = encode_eddystone(&url).unwrap();
        assert_eq!(
            decode_advertisement(&service).unwrap(),
            BeaconFrame::Eddystone(url.clone())
        );
        let mut ad = vec![(service.len() + 3) as u8, 0x16, 0xAA, 0xFE];
        ad.extend_from_slice(&service);
        assert_eq!(
            decode_advertisement(&ad).unwrap(),
            BeaconFrame::Eddystone(url)
        );
        ad[0] += 1;
        assert!(matches!(
            decode_advertisement(&ad),
            Err(BeaconError::BadLength { .. })
        ));
    }

    #[test]
    fn garbage_is_typed() {
        assert_eq!(
            decode_advertisement(&[0x30, 0x00]).unwrap_err().name(),
            "UnknownFrameType"
        );
        assert_eq!(decode_advertisement(&[]).unwrap_err().name(), "BadLength");
    }

    #[test]
    fn sighting_rssi_range() {
        let frame = BeaconFrame::Eddystone(EddystoneFrame::Tlm(EddystoneTlm::default()));
        assert!(BeaconSighting::new(frame.clone(), -121, 0).is_err());
        assert!(BeaconSighting::new(frame.clone(), 1, 0).is_err());
        assert!(BeaconSighting::new(frame, -120, 0).is_ok());
    }

    #[test]
    fn reference_power_adjusts_eddystone() {
        let uid = BeaconFrame::Eddystone(EddystoneFrame::Uid(EddystoneUid {
            tx_power_at_0m: -18,
            namespace: [0; 10],
            instance: [0; 6],
        }));
        assert_eq!(uid.reference_power(), Some(-59.0));
    }
}

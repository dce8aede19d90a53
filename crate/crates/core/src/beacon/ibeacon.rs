use serde::{Deserialize, Serialize};
use uuid::Uuid;

use super::BeaconError;

/// Bluetooth SIG company identifier assigned to Apple.
pub const APPLE_COMPANY_ID: u16 = 0x004C;

/// Total size of the manufacturer-specific AD structure, header included.
pub const IBEACON_AD_LEN: usize = 27;

const AD_TYPE_MANUFACTURER: u8 = 0xFF;
const BEACON_TYPE: [u8; 2] = [0x02, 0x15];

/// iBeacon advertisement contents.
///
/// `measured_power` is the RSSI a receiver sees at one metre.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IBeaconFrame {
    pub uuid: Uuid,
    pub major: u16,
    pub minor: u16,
    pub measured_power: i8,
}

/// Encodes the frame as a manufacturer-specific data AD structure:
///
/// ```text
/// 1A FF 4C 00 02 15 <uuid:16> <major:2 BE> <minor:2 BE> <power:1>
/// ```
pub fn encode_ibeacon(frame: &IBeaconFrame) -> [u8; IBEACON_AD_LEN] {
    let mut out = [0u8; IBEACON_AD_LEN];
    out[0] = (IBEACON_AD_LEN - 1) as u8;
    out[1] = AD_TYPE_MANUFACTURER;
    out[2..4].copy_from_slice(&APPLE_COMPANY_ID.to_le_bytes());
    out[4..6].copy_from_slice(&BEACON_TYPE);
    out[6..22].copy_from_slice(frame.uuid.as_bytes());
    out[22..24].copy_from_slice(&frame.major.to_be_bytes());
    out[24..26].copy_from_slice(&frame.minor.to_be_bytes());
    out[26] = frame.measured_power as u8;
    out
}

pub fn decode_ibeacon(bytes: &[u8]) -> Result<IBeaconFrame, BeaconError> {
    if bytes.len() != IBEACON_AD_LEN || usize::from(bytes[0]) != IBEACON_AD_LEN - 1 {
        return Err(BeaconError::BadLength {
            expected: "27 (AD length 0x1A)",
            actual: bytes.len(),
        });
    }
    if bytes[1] != AD_TYPE_MANUFACTURER {
        return Err(BeaconError::BadAdType {
            expected: AD_TYPE_MANUFACTURER,
            actual: bytes[1],
        });
    }
    let company = u16::from_le_bytes([bytes[2], bytes[3]]);
    if company != APPLE_COMPANY_ID {
        return Err(BeaconError::BadCompanyId(company));
    }
    if bytes[4..6] != BEACON_TYPE {
        return Err(BeaconError::BadBeaconType(bytes[4], bytes[5]));
    }
    let mut uuid = [0u8; 16];
    uuid.copy_from_slice(&bytes[6..22]);
    Ok(IBeaconFrame {
        uuid: Uuid::from_bytes(uuid),
        major: u16::from_be_bytes([bytes[22], bytes[23]]),
        minor: u16::from_be_bytes([bytes[24], bytes[25]]),
        measured_power: bytes[26] as i8,
    })
}

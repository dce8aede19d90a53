use std::io::Write;

use sensekit_core::beacon::{
    decode_advertisement, parse_hex, BeaconFrame, EddystoneFrame, PathLossModel, ProximityEstimate,
    ZoneThresholds,
};

use crate::error::CliError;

pub fn describe(frame: &BeaconFrame) -> Vec<(&'static str, String)> {
    match frame {
        BeaconFrame::IBeacon(f) => vec![
            ("protocol", "iBeacon".into()),
            ("uuid", f.uuid.hyphenated().to_string()),
            ("major", f.major.to_string()),
            ("minor", f.minor.to_string()),
            ("measuredPower", format!("{} dBm", f.measured_power)),
        ],
        BeaconFrame::Eddystone(e) => {
            let mut out = vec![
                ("protocol", "Eddystone".into()),
                ("frameType", e.kind().into()),
            ];
            match e {
                EddystoneFrame::Uid(u) => {
                    out.push(("txPowerAt0m", format!("{} dBm", u.tx_power_at_0m)));
                    out.push(("namespace", hex::encode(u.namespace)));
                    out.push(("instance", hex::encode(u.instance)));
                }
                EddystoneFrame::Url(u) => {
                    out.push(("txPowerAt0m", format!("{} dBm", u.tx_power_at_0m)));
                    out.push(("url", u.url.clone()));
                }
                EddystoneFrame::Tlm(t) => {
                    out.push(("batteryMilliVolts", t.battery_millivolts.to_string()));
                    out.push(("temperatureC", t.temperature.to_f64().to_string()));
                    out.push(("advCount", t.adv_count.to_string()));
                    out.push(("uptimeDeciseconds", t.uptime_deciseconds.to_string()));
                }
            }
            out
        }
    }
}

pub fn run(
    hex: &str,
    rssi: Option<f64>,
    exponent: f64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let bytes = parse_hex(hex)?;
    let frame = decode_advertisement(&bytes)?;
    for (k, v) in describe(&frame) {
        writeln!(out, "{k}: {v}")?;
    }
    if let Some(rssi) = rssi {
        let model = PathLossModel::new(exponent)?;
        let estimate = match frame.reference_power() {
            Some(reference) => ProximityEstimate::from_distance(
                model.distance(rssi, reference),
                &ZoneThresholds::default(),
            ),
            None => ProximityEstimate::unknown(),
        };
        match estimate.distance_meters {
            Some(d) => writeln!(out, "distance: {d:.2} m")?,
            None => writeln!(out, "distance: unknown")?,
        }
        writeln!(
            out,
            "zone: {}",
            format!("{:?}", estimate.zone).to_lowercase()
        )?;
    }
    Ok(())
}

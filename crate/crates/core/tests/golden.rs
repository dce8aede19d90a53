//! Byte-exact output for one sample of every sensor type.
//! Set `SENSEKIT_BLESS=1` to rewrite the files after an intended change.

mod fixtures;

use std::fs;
use std::path::PathBuf;

use sensekit_core::serialization::{csv_header, csv_row, from_json, parse_csv_row, to_json};
use sensekit_core::SensorType;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("SENSEKIT_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name}");
}

#[test]
fn csv_golden() {
    for sensor in SensorType::ALL {
        let sample = fixtures::sample_for(sensor);
        let row = csv_row(&sample).unwrap();
        check(
            &format!("{sensor}.csv"),
            &format!("{}\n{row}\n", csv_header(sensor)),
        );
        assert_eq!(parse_csv_row(sensor, &row).unwrap(), sample);
    }
}

#[test]
fn json_golden() {
    for sensor in SensorType::ALL {
        let sample = fixtures::sample_for(sensor);
        let line = to_json(&sample).unwrap();
        check(&format!("{sensor}.jsonl"), &format!("{line}\n"));
        assert_eq!(from_json(&line).unwrap(), sample);
    }
}

#[test]
fn eddystone_url_quoted() {
    let s = fixtures::eddystone_url_sample();
    let row = csv_row(&s).unwrap();
    assert!(row.contains("\"https://www.example.com/a,b\""), "{row}");
    assert_eq!(
        parse_csv_row(SensorType::EddystoneProximity, &row).unwrap(),
        s
    );
    assert_eq!(from_json(&to_json(&s).unwrap()).unwrap(), s);
}

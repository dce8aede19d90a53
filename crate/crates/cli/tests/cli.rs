use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sensekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sensekit"))
        .args(args)
        .output()
        .expect("run sensekit")
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn err(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn record(dir: &Path, extra: &[&str]) -> Output {
    let d = dir.to_string_lossy();
    let mut args = vec!["record", "--output", &d];
    args.extend_from_slice(extra);
    sensekit(&args)
}

#[test]
fn list_sensors_per_profile() {
    let ios = text(&sensekit(&["list-sensors", "--profile", "ios"]));
    assert_eq!(ios.lines().count(), 19);
    assert!(ios
        .lines()
        .any(|l| l.starts_with("Humidity") && l.ends_with("unavailable")));
    assert!(ios
        .lines()
        .any(|l| l.starts_with("EddystoneProximity") && l.ends_with("scan-only")));

    let android = text(&sensekit(&["list-sensors", "--profile", "android"]));
    assert!(android
        .lines()
        .any(|l| l.starts_with("Humidity") && l.ends_with("full")));
    assert!(android
        .lines()
        .any(|l| l.starts_with("BluetoothClassic") && l.ends_with("scan-only")));
}

#[test]
fn unknown_profile_is_usage_error() {
    let o = sensekit(&["list-sensors", "--profile", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(err(&o).contains("nosuch"));
}

#[test]
fn record_csv_counts_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let args = [
        "--sensor",
        "accelerometer@100",
        "--sensor",
        "battery",
        "--duration",
        "10",
        "--seed",
        "7",
    ];
    assert!(record(&a, &args).status.success());
    assert!(record(&b, &args).status.success());

    let csv = fs::read_to_string(a.join("Accelerometer.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1002);
    for name in ["Accelerometer.csv", "Battery.csv"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn record_jsonl() {
    let tmp = tempfile::tempdir().unwrap();
    let o = record(
        tmp.path(),
        &[
            "--sensor",
            "gyroscope@20",
            "--duration",
            "2",
            "--format",
            "jsonl",
        ],
    );
    assert!(o.status.success(), "{}", err(&o));
    let lines = fs::read_to_string(tmp.path().join("Gyroscope.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 40);
    assert!(lines.starts_with("{\"sensorType\":\"Gyroscope\""));
}

#[test]
fn record_rejects_unavailable() {
    let tmp = tempfile::tempdir().unwrap();
    let o = record(
        tmp.path(),
        &["--sensor", "eddystone:roles=broadcast", "--profile", "ios"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(err(&o).contains("SensorNotAvailable"));

    let o = record(tmp.path(), &["--sensor", "humidity", "--profile", "ios"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn record_bad_sensor_arg() {
    let tmp = tempfile::tempdir().unwrap();
    let o = record(tmp.path(), &["--sensor", "accelerometer@-5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn decode_ibeacon_with_distance() {
    let hex = "1aff4c000215f7826da64fa24e988024bc5b71e0893e00010002c5";
    let o = sensekit(&["decode-beacon", hex, "--rssi", "-79"]);
    assert!(o.status.success(), "{}", err(&o));
    let out = text(&o);
    assert!(out.contains("f7826da6-4fa2-4e98-8024-bc5b71e0893e"));
    assert!(out.contains("major: 1"));
    assert!(out.contains("minor: 2"));
    assert!(out.contains("distance: 10.00 m"), "{out}");
}

#[test]
fn decode_eddystone_url() {
    let o = sensekit(&["decode-beacon", "10ec00676f6f676c6507"]);
    assert!(o.status.success(), "{}", err(&o));
    assert!(text(&o).contains("http://www.google.com"));
}

#[test]
fn decode_garbage_is_data_error() {
    for input in ["zz", "ff00"] {
        let o = sensekit(&["decode-beacon", input]);
        assert_eq!(o.status.code(), Some(1), "{input}");
    }
}

#[test]
fn predict_and_simulate() {
    let o = sensekit(&["predict", "--mode", "accelerometer"]);
    assert_eq!(text(&o).lines().next(), Some("31.51"));

    let o = sensekit(&["predict", "--sensor", "gravity", "--sensor", "rotation"]);
    assert_eq!(text(&o).lines().next(), Some("21.07"));

    let o = sensekit(&["predict", "--mode", "warp-drive"]);
    assert_eq!(o.status.code(), Some(2));

    let o = sensekit(&["simulate", "--mode", "location-best", "--step", "30"]);
    let out = text(&o);
    assert_eq!(out.lines().next(), Some("hours,level_percent"));
    assert_eq!(out.lines().nth(1), Some("0.0000,100.0000"));
    assert_eq!(out.lines().last(), Some("17.5000,0.0000"));

    let o = sensekit(&["simulate", "--step", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn convert_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let session = tmp.path().join("s");
    assert!(
        record(&session, &["--sensor", "location", "--duration", "5"])
            .status
            .success()
    );
    let csv = session.join("Location.csv");
    let json = tmp.path().join("Location.jsonl");
    let back = tmp.path().join("Location.csv");

    let j = json.to_string_lossy().into_owned();
    let b = back.to_string_lossy().into_owned();
    assert!(
        sensekit(&["convert", &csv.to_string_lossy(), "--output", &j])
            .status
            .success()
    );
    assert!(sensekit(&["convert", &j, "--output", &b]).status.success());
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&back).unwrap());
}

#[test]
fn convert_truncated_row_reports_line() {
    let tmp = tempfile::tempdir().unwrap();
    let session = tmp.path().join("s");
    assert!(record(
        &session,
        &["--sensor", "accelerometer@10", "--duration", "1"]
    )
    .status
    .success());
    let csv = session.join("Accelerometer.csv");
    let mut content = fs::read_to_string(&csv).unwrap();
    content.truncate(content.len() - 8);
    fs::write(&csv, content).unwrap();

    let o = sensekit(&[
        "convert",
        &csv.to_string_lossy(),
        "--output",
        &tmp.path().to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(err(&o).contains("line 12"), "{}", err(&o));
}

#[test]
fn convert_unknown_name_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("Toaster.csv");
    fs::write(&path, "x\n").unwrap();
    let o = sensekit(&["convert", &path.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(2));
}

//! Session directory layout: `manifest.json` plus one file per sensor,
//! `<canonical-name>.csv` or `<canonical-name>.jsonl`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clock::SessionClock;
use crate::config::SensorConfig;
use crate::payload::SchemaMismatch;
use crate::sample::SensorSample;
use crate::sensor::SensorType;

use super::{
    csv_header, csv_row, from_json, parse_csv_row, to_json, ParseError, SerializationError,
};

/// First line of every session CSV file.
pub const CSV_MAGIC: &str = "#sensekit v1";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SessionFormat {
    Csv,
    Jsonl,
}

impl SessionFormat {
    pub const fn extension(self) -> &'static str {
        match self {
            SessionFormat::Csv => "csv",
            SessionFormat::Jsonl => "jsonl",
        }
    }

    pub const fn other(self) -> Self {
        match self {
            SessionFormat::Csv => SessionFormat::Jsonl,
            SessionFormat::Jsonl => SessionFormat::Csv,
        }
    }

    /// Recognises `<canonical-name>.<csv|jsonl>`.
    pub fn from_file_name(path: &Path) -> Result<(SensorType, SessionFormat), SerializationError> {
        let unknown = || SerializationError::UnknownFileName(path.display().to_string());
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(unknown)?;
        let ext = path
            .extension()
            .and_then(|s| s.to_str())
            .ok_or_else(unknown)?;
        let format = ext.parse::<SessionFormat>().map_err(|_| unknown())?;
        let sensor = SensorType::from_canonical_name(stem).ok_or_else(unknown)?;
        Ok((sensor, format))
    }
}

impl fmt::Display for SessionFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for SessionFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(SessionFormat::Csv),
            "jsonl" => Ok(SessionFormat::Jsonl),
            other => Err(format!("unknown format `{other}` (expected csv or jsonl)")),
        }
    }
}

pub fn sensor_file_name(sensor: SensorType, format: SessionFormat) -> String {
    format!("{}.{}", sensor.canonical_name(), format.extension())
}

/// One encoded line, without the newline.
pub fn encode_line(
    sample: &SensorSample,
    format: SessionFormat,
) -> Result<String, SerializationError> {
    match format {
        SessionFormat::Csv => csv_row(sample),
        SessionFormat::Jsonl => to_json(sample),
    }
}

fn file_preamble(sensor: SensorType, format: SessionFormat) -> String {
    match format {
        SessionFormat::Csv => format!("{CSV_MAGIC}\n{}\n", csv_header(sensor)),
        SessionFormat::Jsonl => String::new(),
    }
}

/// Renders a complete per-sensor file.
pub fn render_session_file(
    sensor: SensorType,
    format: SessionFormat,
    samples: &[SensorSample],
) -> Result<String, SerializationError> {
    let mut out = file_preamble(sensor, format);
    for s in samples {
        if s.sensor_type != sensor {
            return Err(SchemaMismatch {
                expected: sensor,
                found: s.sensor_type,
            }
            .into());
        }
        out.push_str(&encode_line(s, format)?);
        out.push('\n');
    }
    Ok(out)
}

/// Parses a complete per-sensor file. Errors carry 1-based file line
/// numbers.
pub fn read_session_file(
    sensor: SensorType,
    format: SessionFormat,
    text: &str,
) -> Result<Vec<SensorSample>, SerializationError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    if format == SessionFormat::Csv {
        match lines.next() {
            Some((_, CSV_MAGIC)) => {}
            _ => return Err(ParseError::new(1, 1, format!("missing `{CSV_MAGIC}` line")).into()),
        }
        let header = csv_header(sensor);
        match lines.next() {
            Some((_, h)) if h == header => {}
            Some((n, _)) => {
                return Err(ParseError::new(n, 1, format!("header is not `{header}`")).into())
            }
            None => return Err(ParseError::new(2, 1, "missing header line").into()),
        }
    }
    let mut out = Vec::new();
    for (n, line) in lines {
        if line.is_empty() && format == SessionFormat::Jsonl {
            continue;
        }
        let sample = match format {
            SessionFormat::Csv => parse_csv_row(sensor, line),
            SessionFormat::Jsonl => from_json(line),
        }
        .map_err(|e| e.at_line(n))?;
        if sample.sensor_type != sensor {
            return Err(SchemaMismatch {
                expected: sensor,
                found: sample.sensor_type,
            }
            .into());
        }
        out.push(sample);
    }
    if !text.is_empty() && !text.ends_with('\n') {
        let n = text.lines().count();
        return Err(ParseError::new(
            n,
            text.lines().last().map_or(1, |l| l.chars().count() + 1),
            "truncated file: last line has no newline",
        )
        .into());
    }
    Ok(out)
}

/// Re-encodes a per-sensor file in the other format.
pub fn convert(
    sensor: SensorType,
    from: SessionFormat,
    to: SessionFormat,
    text: &str,
) -> Result<String, SerializationError> {
    let samples = read_session_file(sensor, from, text)?;
    render_session_file(sensor, to, &samples)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestSensor {
    pub sensor_type: SensorType,
    pub file: String,
    pub samples: u64,
    pub config: SensorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub format: String,
    pub profile: String,
    pub seed: u64,
    pub duration_nanos: u64,
    pub encoding: SessionFormat,
    pub clock: SessionClock,
    pub sensors: Vec<ManifestSensor>,
}

struct OpenFile {
    writer: BufWriter<File>,
    config: SensorConfig,
    samples: u64,
}

/// Streams samples into a session directory.
pub struct SessionWriter {
    dir: PathBuf,
    format: SessionFormat,
    files: BTreeMap<SensorType, OpenFile>,
}

impl SessionWriter {
    pub fn create(dir: impl Into<PathBuf>, format: SessionFormat) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(SessionWriter {
            dir,
            format,
            files: BTreeMap::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Creates the sensor's file and writes its preamble.
    pub fn add_sensor(&mut self, config: &SensorConfig) -> std::io::Result<()> {
        let sensor = config.sensor_type;
        let path = self.dir.join(sensor_file_name(sensor, self.format));
        let mut writer = BufWriter::new(File::create(path)?);
        writer.write_all(file_preamble(sensor, self.format).as_bytes())?;
        self.files.insert(
            sensor,
            OpenFile {
                writer,
                config: config.clone(),
                samples: 0,
            },
        );
        Ok(())
    }

    pub fn write(&mut self, sample: &SensorSample) -> Result<(), SerializationError> {
        let line = encode_line(sample, self.format)?;
        let file = self.files.get_mut(&sample.sensor_type).ok_or_else(|| {
            SerializationError::UnknownFileName(sensor_file_name(sample.sensor_type, self.format))
        })?;
        file.writer.write_all(line.as_bytes())?;
        file.writer.write_all(b"\n")?;
        file.samples += 1;
        Ok(())
    }

    /// Flushes every file and writes the manifest.
    pub fn finish(
        self,
        profile: &str,
        seed: u64,
        duration_nanos: u64,
        clock: SessionClock,
    ) -> Result<Manifest, SerializationError> {
        let mut sensors = Vec::new();
        for (sensor, mut f) in self.files {
            f.writer.flush()?;
            sensors.push(ManifestSensor {
                sensor_type: sensor,
                file: sensor_file_name(sensor, self.format),
                samples: f.samples,
                config: f.config,
            });
        }
        let manifest = Manifest {
            format: CSV_MAGIC.trim_start_matches('#').to_owned(),
            profile: profile.to_owned(),
            seed,
            duration_nanos,
            encoding: self.format,
            clock,
            sensors,
        };
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
        text.push('\n');
        fs::write(self.dir.join(MANIFEST_FILE), text)?;
        Ok(manifest)
    }
}

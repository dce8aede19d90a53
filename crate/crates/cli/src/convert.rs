use std::path::{Path, PathBuf};

use sensekit_core::serialization::{convert, sensor_file_name, SessionFormat};

use crate::error::CliError;

/// Converts one session file; returns the path written.
pub fn run(
    input: &Path,
    to: Option<SessionFormat>,
    output: Option<&Path>,
) -> Result<PathBuf, CliError> {
    let (sensor, from) = SessionFormat::from_file_name(input)?;
    let to = to.unwrap_or(from.other());
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::data(format!("{}: {e}", input.display())))?;
    let converted = convert(sensor, from, to, &text)
        .map_err(|e| CliError::from(e).prefixed(&input.display().to_string()))?;
    let target = match output {
        Some(p) if p.is_dir() => p.join(sensor_file_name(sensor, to)),
        Some(p) => p.to_path_buf(),
        None => input.with_file_name(sensor_file_name(sensor, to)),
    };
    std::fs::write(&target, converted)?;
    Ok(target)
}

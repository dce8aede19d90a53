use std::io::Write;
use std::path::Path;

use sensekit_core::energy::{
    modes_for_configs, predict_lifetime, simulate_discharge, EnergyProfile, SensorMode,
};
use sensekit_core::SensorConfig;

use crate::error::CliError;

pub fn load_profile(path: Option<&Path>) -> Result<EnergyProfile, CliError> {
    match path {
        None => Ok(EnergyProfile::iphone_5s()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
            EnergyProfile::parse(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", p.display())))
        }
    }
}

fn active_modes(modes: &[String], sensors: &[SensorConfig]) -> Result<Vec<SensorMode>, CliError> {
    let mut all: Vec<SensorMode> = modes.iter().map(SensorMode::new).collect();
    all.extend(modes_for_configs(sensors)?);
    Ok(all)
}

pub fn predict(
    profile: &EnergyProfile,
    modes: &[String],
    sensors: &[SensorConfig],
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let modes = active_modes(modes, sensors)?;
    let p = predict_lifetime(profile, &modes)?;
    writeln!(out, "{:.2}", p.hours)?;
    for c in &p.caveats {
        writeln!(out, "{c}")?;
    }
    Ok(())
}

pub fn simulate(
    profile: &EnergyProfile,
    modes: &[String],
    sensors: &[SensorConfig],
    step_minutes: f64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let modes = active_modes(modes, sensors)?;
    let series = simulate_discharge(profile, &modes, step_minutes)?;
    writeln!(out, "hours,level_percent")?;
    for p in series.points() {
        writeln!(out, "{:.4},{:.4}", p.hours, p.level * 100.0)?;
    }
    Ok(())
}

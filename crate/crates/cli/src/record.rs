use std::io::Write;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use sensekit_core::clock::{seconds_to_nanos, SimulatedTimeSource, SystemTimeSource, TimeSource};
use sensekit_core::serialization::{Manifest, SerializationError, SessionFormat, SessionWriter};
use sensekit_core::{PlatformProfile, SensorConfig, SensorManager};

use crate::error::CliError;

/// Wall-clock reading stamped on simulated sessions (2020-09-13T12:26:40Z).
const SIMULATED_WALL_EPOCH_NANOS: i64 = 1_600_000_000_000_000_000;

pub struct RecordPlan<'a> {
    pub profile: &'a PlatformProfile,
    pub sensors: &'a [SensorConfig],
    pub duration_seconds: f64,
    pub format: SessionFormat,
    pub seed: u64,
    pub dir: &'a Path,
    pub realtime: bool,
}

type Sink = Arc<Mutex<(Option<SessionWriter>, Option<SerializationError>)>>;

pub fn run(plan: &RecordPlan<'_>, out: &mut dyn Write) -> Result<Manifest, CliError> {
    if !(plan.duration_seconds.is_finite() && plan.duration_seconds > 0.0) {
        return Err(CliError::usage(
            "--duration must be a positive number of seconds",
        ));
    }
    if plan.sensors.is_empty() {
        return Err(CliError::usage("give at least one --sensor"));
    }
    let duration = seconds_to_nanos(plan.duration_seconds);
    let sim = SimulatedTimeSource::new(0, SIMULATED_WALL_EPOCH_NANOS);
    let time: Box<dyn TimeSource> = if plan.realtime {
        Box::new(SystemTimeSource::new())
    } else {
        Box::new(sim.clone())
    };
    let mut manager = SensorManager::new(plan.profile.clone(), time, plan.seed);

    let mut handles = Vec::new();
    for cfg in plan.sensors {
        handles.push(manager.register(cfg.sensor_type, cfg.clone())?);
    }

    let mut writer = SessionWriter::create(plan.dir, plan.format)
        .map_err(|e| CliError::data(format!("{}: {e}", plan.dir.display())))?;
    for cfg in plan.sensors {
        writer.add_sensor(cfg)?;
    }
    let sink: Sink = Arc::new(Mutex::new((Some(writer), None)));
    for &h in &handles {
        let sink = sink.clone();
        manager.subscribe(h, move |sample| {
            let mut guard = sink.lock().unwrap_or_else(|p| p.into_inner());
            let (writer, failure) = &mut *guard;
            if failure.is_some() {
                return;
            }
            if let Some(w) = writer {
                if let Err(e) = w.write(sample) {
                    *failure = Some(e);
                }
            }
        })?;
    }
    for &h in &handles {
        manager.start(h)?;
    }

    let chunk = 1_000_000_000u64;
    let mut elapsed = 0;
    while elapsed < duration {
        let step = chunk.min(duration - elapsed);
        if plan.realtime {
            std::thread::sleep(Duration::from_nanos(step));
        } else {
            sim.advance(step);
        }
        elapsed += step;
        manager.poll()?;
    }
    for &h in &handles {
        manager.stop(h)?;
    }
    let clock = *manager.clock();
    drop(manager);

    let (writer, failure) = {
        let mut guard = sink.lock().unwrap_or_else(|p| p.into_inner());
        (guard.0.take(), guard.1.take())
    };
    if let Some(e) = failure {
        return Err(e.into());
    }
    let writer = writer.expect("writer is only taken here");
    let manifest = writer.finish(plan.profile.name(), plan.seed, duration, clock)?;
    for s in &manifest.sensors {
        writeln!(out, "{}: {} samples", s.file, s.samples)?;
    }
    Ok(manifest)
}

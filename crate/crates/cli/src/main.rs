//! `sensekit`: list sensors, record simulated sessions, decode beacon
//! frames, predict battery life and convert session files.

mod beacon;
mod convert;
mod energy;
mod error;
mod record;
mod sensor_arg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sensekit_core::serialization::SessionFormat;
use sensekit_core::{PlatformProfile, SensorConfig, SensorType};

use error::CliError;

#[derive(Parser)]
#[command(
    name = "sensekit",
    version,
    about = "Continuous sensing on simulated hardware"
)]
struct Cli {
    /// Platform profile: `ios`, `android`, or a profile file.
    #[arg(long, global = true, default_value = "ios")]
    profile: String,

    /// Seed for every synthetic driver.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output file (session directory for `record`). Defaults to stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every sensor and its availability on the profile.
    ListSensors,
    /// Run sensors for a while and write a session directory.
    Record {
        /// `name[@rate][:key=value,...]`, repeatable.
        #[arg(long = "sensor", required = true)]
        sensors: Vec<String>,
        /// Session length in seconds.
        #[arg(long, default_value_t = 10.0)]
        duration: f64,
        #[arg(long, default_value = "csv")]
        format: SessionFormat,
        /// Follow the system clock instead of fast-forwarding.
        #[arg(long)]
        realtime: bool,
    },
    /// Decode a hex-encoded iBeacon or Eddystone advertisement.
    DecodeBeacon {
        hex: Vec<String>,
        /// Received signal strength, for a distance estimate.
        #[arg(long, allow_hyphen_values = true)]
        rssi: Option<f64>,
        /// Path-loss exponent.
        #[arg(long, default_value_t = 2.0)]
        exponent: f64,
    },
    /// Predict battery lifetime in hours.
    Predict {
        #[arg(long = "mode")]
        modes: Vec<String>,
        /// Sensors to map onto calibrated modes.
        #[arg(long = "sensor")]
        sensors: Vec<String>,
        #[arg(long)]
        energy_profile: Option<PathBuf>,
    },
    /// Write the predicted discharge curve as CSV.
    Simulate {
        #[arg(long = "mode")]
        modes: Vec<String>,
        #[arg(long = "sensor")]
        sensors: Vec<String>,
        /// Minutes between points.
        #[arg(long, default_value_t = 60.0)]
        step: f64,
        #[arg(long)]
        energy_profile: Option<PathBuf>,
    },
    /// Convert a session file between csv and jsonl.
    Convert {
        input: PathBuf,
        /// Target format; defaults to the other one.
        #[arg(long)]
        to: Option<SessionFormat>,
    },
}

fn load_platform(arg: &str) -> Result<PlatformProfile, CliError> {
    if let Ok(p) = PlatformProfile::builtin(arg) {
        return Ok(p);
    }
    let path = Path::new(arg);
    if !path.is_file() {
        return Err(CliError::usage(format!(
            "UnknownProfile: `{arg}` is neither ios, android nor a profile file"
        )));
    }
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(arg)
        .to_owned();
    PlatformProfile::parse(&name, &text).map_err(|e| CliError::usage(format!("{arg}: {e}")))
}

fn sensor_configs(args: &[String]) -> Result<Vec<SensorConfig>, CliError> {
    args.iter()
        .map(|a| sensor_arg::parse_sensor_arg(a))
        .collect()
}

fn with_output<T>(
    output: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> Result<T, CliError>,
) -> Result<T, CliError> {
    match output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            let r = f(&mut w)?;
            w.flush()?;
            Ok(r)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let output = cli.output.as_deref();
    match cli.command {
        Command::ListSensors => {
            let profile = load_platform(&cli.profile)?;
            with_output(output, |out| {
                for s in SensorType::ALL {
                    writeln!(
                        out,
                        "{:<19} {}",
                        s.canonical_name(),
                        profile.availability(s).as_str()
                    )?;
                }
                Ok(())
            })
        }
        Command::Record {
            sensors,
            duration,
            format,
            realtime,
        } => {
            let profile = load_platform(&cli.profile)?;
            let sensors = sensor_configs(&sensors)?;
            let dir = output.ok_or_else(|| CliError::usage("record needs --output <dir>"))?;
            let plan = record::RecordPlan {
                profile: &profile,
                sensors: &sensors,
                duration_seconds: duration,
                format,
                seed: cli.seed,
                dir,
                realtime,
            };
            record::run(&plan, &mut io::stdout().lock()).map(|_| ())
        }
        Command::DecodeBeacon {
            hex,
            rssi,
            exponent,
        } => with_output(output, |out| {
            beacon::run(&hex.join(""), rssi, exponent, out)
        }),
        Command::Predict {
            modes,
            sensors,
            energy_profile,
        } => {
            let profile = energy::load_profile(energy_profile.as_deref())?;
            let sensors = sensor_configs(&sensors)?;
            with_output(output, |out| {
                energy::predict(&profile, &modes, &sensors, out)
            })
        }
        Command::Simulate {
            modes,
            sensors,
            step,
            energy_profile,
        } => {
            let profile = energy::load_profile(energy_profile.as_deref())?;
            let sensors = sensor_configs(&sensors)?;
            with_output(output, |out| {
                energy::simulate(&profile, &modes, &sensors, step, out)
            })
        }
        Command::Convert { input, to } => {
            let written = convert::run(&input, to, output)?;
            println!("{}", written.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sensekit: {e}");
            ExitCode::from(e.code)
        }
    }
}

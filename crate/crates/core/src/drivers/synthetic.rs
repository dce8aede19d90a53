use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use uuid::Uuid;

use crate::beacon::{
    BeaconFrame, BeaconSighting, EddystoneFrame, EddystoneTlm, EddystoneUid, EddystoneUrl, Fixed88,
    IBeaconFrame, PathLossModel,
};
use crate::clock::{nanos_to_seconds, NANOS_PER_SECOND};
use crate::config::{AccuracyMode, SensorConfig};
use crate::payload::*;
use crate::sample::SensorSample;
use crate::sensor::SensorType;

use super::schedule::Periodic;
use super::{Driver, DriverError};

/// Mean time between state changes of event-driven sensors, in seconds.
pub const MEAN_DWELL_SECONDS: f64 = 30.0;

/// Upper bound on simulated walking speed, m/s.
pub const MAX_WALKING_SPEED: f64 = 2.0;

const METERS_PER_DEGREE: f64 = 111_320.0;

/// Seed for one sensor, derived from a session seed (SplitMix64 finaliser).
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

/// First-order low-pass noise step with stationary deviation `sigma`.
fn ar1(prev: f64, a: f64, sigma: f64, rng: &mut ChaCha8Rng) -> f64 {
    a * prev + (1.0 - a * a).sqrt() * sigma * normal(rng)
}

enum Timing {
    Periodic(Periodic),
    Events {
        next: Option<u64>,
        report_current: bool,
    },
    Silent,
}

/// Orientation as a smooth function of time; all three fused outputs of one
/// seed agree on it.
#[derive(Debug, Clone)]
struct FusedMotion {
    phases: [f64; 4],
    noise: Vector3,
}

impl FusedMotion {
    fn new(seed: u64) -> Self {
        let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0xD3_51CE_0000_0001);
        FusedMotion {
            phases: [
                r.random::<f64>() * TAU,
                r.random::<f64>() * TAU,
                r.random::<f64>() * TAU,
                r.random::<f64>() * TAU,
            ],
            noise: Vector3::default(),
        }
    }

    fn attitude(&self, t: f64) -> Quaternion {
        let roll = 0.10 * (TAU * 0.21 * t + self.phases[0]).sin();
        let pitch = 0.20 * (TAU * 0.13 * t + self.phases[1]).sin();
        let yaw = 0.60 * (TAU * 0.05 * t + self.phases[2]).sin();
        let (sr, cr) = (roll / 2.0).sin_cos();
        let (sp, cp) = (pitch / 2.0).sin_cos();
        let (sy, cy) = (yaw / 2.0).sin_cos();
        Quaternion {
            w: cr * cp * cy + sr * sp * sy,
            x: sr * cp * cy - cr * sp * sy,
            y: cr * sp * cy + sr * cp * sy,
            z: cr * cp * sy - sr * sp * cy,
        }
        .normalized()
    }

    fn gravity(&self, t: f64) -> Vector3 {
        self.attitude(t)
            .conjugate()
            .rotate(Vector3::new(0.0, 0.0, -1.0))
    }

    fn user_acceleration(&mut self, t: f64, rng: &mut ChaCha8Rng) -> Vector3 {
        let step = TAU * 1.9 * t + self.phases[3];
        self.noise = Vector3::new(
            ar1(self.noise.x, 0.8, 0.01, rng),
            ar1(self.noise.y, 0.8, 0.01, rng),
            ar1(self.noise.z, 0.8, 0.01, rng),
        );
        Vector3::new(
            0.04 * step.sin() + self.noise.x,
            0.03 * (step + PI / 3.0).sin() + self.noise.y,
            0.12 * (2.0 * step).sin() + self.noise.z,
        )
    }
}

#[derive(Debug, Clone)]
struct LocationWalk {
    latitude: f64,
    longitude: f64,
    altitude: f64,
    heading: f64,
    speed: f64,
    last_t: Option<f64>,
}

#[derive(Debug, Clone)]
struct SimBeacon {
    frame: BeaconFrame,
    distance: f64,
}

enum Model {
    Inertial {
        base: Vector3,
        sigma: f64,
        noise: Vector3,
    },
    Fused(FusedMotion),
    Altimeter {
        altitude: f64,
    },
    Humidity {
        value: f64,
    },
    Light {
        log_level: f64,
    },
    Temperature {
        value: f64,
    },
    Location(LocationWalk),
    Microphone {
        frame: u64,
        noise: f64,
    },
    Bluetooth {
        devices: Vec<(MacAddress, String)>,
    },
    Beacons {
        beacons: Vec<SimBeacon>,
        cursor: usize,
        adv_count: u32,
    },
    Screen {
        on: bool,
    },
    Activity {
        current: Activity,
    },
    Pedometer {
        steps: u64,
        distance: f64,
    },
    Battery {
        percent: u32,
    },
}

/// Deterministic, physically plausible stand-in for a hardware sensor.
/// The same sensor, configuration and seed always yield the same stream.
pub struct SyntheticDriver {
    sensor: SensorType,
    config: SensorConfig,
    pending: Option<SensorConfig>,
    rng: ChaCha8Rng,
    timing: Timing,
    model: Model,
}

fn timing_for(config: &SensorConfig) -> Timing {
    if config.sensor_type.is_beacon() && !config.scans() {
        Timing::Silent
    } else if let Some(rate) = config.tick_rate_hz() {
        Timing::Periodic(Periodic::new(rate))
    } else {
        Timing::Events {
            next: None,
            report_current: true,
        }
    }
}

fn random_mac(rng: &mut ChaCha8Rng) -> MacAddress {
    let mut b: [u8; 6] = rng.random();
    // locally administered, unicast
    b[0] = (b[0] | 0x02) & 0xFE;
    MacAddress(b)
}

impl SyntheticDriver {
    pub fn new(sensor: SensorType, config: &SensorConfig, seed: u64) -> Result<Self, DriverError> {
        if config.sensor_type != sensor {
            return Err(DriverError::SchemaMismatch(SchemaMismatch {
                expected: sensor,
                found: config.sensor_type,
            }));
        }
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = match sensor {
            SensorType::Accelerometer => Model::Inertial {
                base: Vector3::new(0.0, 0.0, 1.0),
                sigma: 0.02,
                noise: Vector3::default(),
            },
            SensorType::Gyroscope => Model::Inertial {
                base: Vector3::default(),
                sigma: 0.05,
                noise: Vector3::default(),
            },
            SensorType::Magnetometer => Model::Inertial {
                base: Vector3::new(19.5, 0.4, -44.8),
                sigma: 0.6,
                noise: Vector3::default(),
            },
            SensorType::Gravity | SensorType::LinearAcceleration | SensorType::Rotation => {
                Model::Fused(FusedMotion::new(seed))
            }
            SensorType::Altimeter => Model::Altimeter { altitude: 0.0 },
            SensorType::Humidity => Model::Humidity {
                value: rng.random_range(35.0..60.0),
            },
            SensorType::Light => Model::Light {
                log_level: rng.random_range(-1.0..1.0),
            },
            SensorType::AmbientTemperature => Model::Temperature {
                value: rng.random_range(18.0..24.0),
            },
            SensorType::Location => Model::Location(LocationWalk {
                latitude: 51.5246 + rng.random_range(-0.01..0.01),
                longitude: -0.0404 + rng.random_range(-0.01..0.01),
                altitude: rng.random_range(5.0..40.0),
                heading: rng.random_range(0.0..TAU),
                speed: rng.random_range(0.8..1.5),
                last_t: None,
            }),
            SensorType::Microphone => Model::Microphone {
                frame: 0,
                noise: 0.0,
            },
            SensorType::BluetoothClassic => {
                let names = [
                    "Pixel 4a",
                    "JBL Flip, Kitchen",
                    "Office \"Desk\" Speaker",
                    "Car Audio",
                ];
                Model::Bluetooth {
                    devices: names
                        .iter()
                        .map(|n| (random_mac(&mut rng), (*n).to_owned()))
                        .collect(),
                }
            }
            SensorType::IBeaconProximity => {
                let uuid = Uuid::from_bytes(rng.random());
                let beacons = (0..3)
                    .map(|i| SimBeacon {
                        frame: BeaconFrame::IBeacon(IBeaconFrame {
                            uuid,
                            major: rng.random_range(1..100),
                            minor: i + 1,
                            measured_power: rng.random_range(-62..=-56),
                        }),
                        distance: rng.random_range(0.3..8.0),
                    })
                    .collect();
                Model::Beacons {
                    beacons,
                    cursor: 0,
                    adv_count: 0,
                }
            }
            SensorType::EddystoneProximity => {
                let namespace: [u8; 10] = rng.random();
                let mut beacons: Vec<SimBeacon> = (0..2)
                    .map(|_| SimBeacon {
                        frame: BeaconFrame::Eddystone(EddystoneFrame::Uid(EddystoneUid {
                            tx_power_at_0m: rng.random_range(-22..=-16),
                            namespace,
                            instance: rng.random(),
                        })),
                        distance: rng.random_range(0.3..8.0),
                    })
                    .collect();
                beacons.push(SimBeacon {
                    frame: BeaconFrame::Eddystone(EddystoneFrame::Url(EddystoneUrl {
                        tx_power_at_0m: -20,
                        url: "https://www.sensingkit.org".to_owned(),
                    })),
                    distance: rng.random_range(0.3..8.0),
                });
                Model::Beacons {
                    beacons,
                    cursor: 0,
                    adv_count: 0,
                }
            }
            SensorType::ScreenStatus => Model::Screen {
                on: rng.random_bool(0.5),
            },
            SensorType::MotionActivity => Model::Activity {
                current: Activity::ALL[rng.random_range(0..Activity::ALL.len())],
            },
            SensorType::Pedometer => Model::Pedometer {
                steps: 0,
                distance: 0.0,
            },
            SensorType::Battery => Model::Battery { percent: 100 },
        };
        Ok(SyntheticDriver {
            sensor,
            config: config.clone(),
            pending: None,
            rng,
            timing: timing_for(config),
            model,
        })
    }

    pub fn config(&self) -> &SensorConfig {
        &self.config
    }

    fn dwell_nanos(&mut self) -> u64 {
        let exp = Exp::new(1.0 / MEAN_DWELL_SECONDS).expect("positive rate");
        let seconds: f64 = exp.sample(&mut self.rng);
        ((seconds * NANOS_PER_SECOND as f64).round() as u64).max(1)
    }

    fn periodic_payload(&mut self, t_nanos: u64) -> Payload {
        let t = nanos_to_seconds(t_nanos);
        let rng = &mut self.rng;
        let sensor = self.sensor;
        let config = &self.config;
        match &mut self.model {
            Model::Inertial { base, sigma, noise } => {
                *noise = Vector3::new(
                    ar1(noise.x, 0.9, *sigma, rng),
                    ar1(noise.y, 0.9, *sigma, rng),
                    ar1(noise.z, 0.9, *sigma, rng),
                );
                let v = Vector3::new(base.x + noise.x, base.y + noise.y, base.z + noise.z);
                match sensor {
                    SensorType::Accelerometer => Payload::Accelerometer(v),
                    SensorType::Gyroscope => Payload::Gyroscope(v),
                    _ => Payload::Magnetometer(v),
                }
            }
            Model::Fused(m) => match sensor {
                SensorType::Gravity => Payload::Gravity(m.gravity(t)),
                SensorType::LinearAcceleration => {
                    Payload::LinearAcceleration(m.user_acceleration(t, rng))
                }
                _ => Payload::Rotation(m.attitude(t)),
            },
            Model::Altimeter { altitude } => {
                *altitude = (*altitude + 0.05 * normal(rng)).clamp(-400.0, 8_000.0);
                let pressure = 101.325 * (1.0 - 2.255_77e-5 * *altitude).powf(5.255_88);
                Payload::Altimeter(AltimeterData {
                    relative_altitude_meters: *altitude,
                    pressure_kpa: pressure,
                })
            }
            Model::Humidity { value } => {
                *value = (*value + 0.2 * normal(rng)).clamp(0.0, 100.0);
                Payload::Humidity(HumidityData { percent: *value })
            }
            Model::Light { log_level } => {
                *log_level = ar1(*log_level, 0.98, 0.8, rng);
                Payload::Light(LightData {
                    lux: 300.0 * log_level.exp(),
                })
            }
            Model::Temperature { value } => {
                *value = (*value + 0.02 * normal(rng)).clamp(-40.0, 60.0);
                Payload::AmbientTemperature(TemperatureData { celsius: *value })
            }
            Model::Location(w) => {
                let dt = w.last_t.map_or(0.0, |last| (t - last).max(0.0));
                w.last_t = Some(t);
                w.heading = (w.heading + 0.3 * normal(rng)).rem_euclid(TAU);
                w.speed = (w.speed + 0.1 * normal(rng)).clamp(0.0, MAX_WALKING_SPEED);
                let step = w.speed * dt;
                let north = step * w.heading.cos();
                let east = step * w.heading.sin();
                w.latitude = (w.latitude + north / METERS_PER_DEGREE).clamp(-90.0, 90.0);
                let scale = w.latitude.to_radians().cos().max(1e-6);
                w.longitude += east / (METERS_PER_DEGREE * scale);
                if w.longitude > 180.0 {
                    w.longitude -= 360.0;
                } else if w.longitude < -180.0 {
                    w.longitude += 360.0;
                }
                w.altitude += 0.1 * normal(rng);
                let base = match config.accuracy.unwrap_or(AccuracyMode::Best) {
                    AccuracyMode::Best => 5.0,
                    AccuracyMode::Balanced => 30.0,
                    AccuracyMode::LowPower => 100.0,
                };
                Payload::Location(LocationData {
                    latitude: w.latitude,
                    longitude: w.longitude,
                    altitude_meters: w.altitude,
                    horizontal_accuracy_meters: base * (1.0 + 0.2 * normal(rng).abs()),
                })
            }
            Model::Microphone { frame, noise } => {
                *noise = ar1(*noise, 0.95, 0.03, rng);
                let payload = Payload::Microphone(MicrophoneData {
                    frame_index: *frame,
                    rms_amplitude: (0.05 + *noise).abs().min(1.0),
                });
                *frame += 1;
                payload
            }
            Model::Bluetooth { devices } => {
                let (address, name) = devices[rng.random_range(0..devices.len())].clone();
                Payload::BluetoothClassic(BluetoothDevice {
                    device_address: address,
                    device_name: name,
                    rssi: rng.random_range(-95..=-40),
                })
            }
            Model::Beacons {
                beacons,
                cursor,
                adv_count,
            } => {
                let model = PathLossModel::default();
                let idx = *cursor % beacons.len();
                *cursor += 1;
                *adv_count = adv_count.wrapping_add(1);
                for b in beacons.iter_mut() {
                    b.distance = (b.distance * (0.1 * normal(rng)).exp()).clamp(0.2, 30.0);
                }
                let beacon = &beacons[idx];
                // every tenth Eddystone advertisement is telemetry
                let frame = if sensor == SensorType::EddystoneProximity && *cursor % 10 == 0 {
                    BeaconFrame::Eddystone(EddystoneFrame::Tlm(EddystoneTlm {
                        battery_millivolts: 3_000 - (*cursor as u16 % 500),
                        temperature: Fixed88::from_f64(21.0 + normal(rng) * 0.5)
                            .unwrap_or_default(),
                        adv_count: *adv_count,
                        uptime_deciseconds: (t * 10.0) as u32,
                    }))
                } else {
                    beacon.frame.clone()
                };
                let reference = beacon.frame.reference_power().unwrap_or(-59.0);
                let rssi = (model.rssi_at(beacon.distance, reference) + 2.0 * normal(rng))
                    .round()
                    .clamp(-120.0, 0.0) as i8;
                let sighting = BeaconSighting {
                    frame,
                    rssi,
                    timestamp_nanos: t_nanos,
                };
                if sensor == SensorType::IBeaconProximity {
                    Payload::IBeaconProximity(sighting)
                } else {
                    Payload::EddystoneProximity(sighting)
                }
            }
            _ => unreachable!("event-driven model on a clocked schedule"),
        }
    }

    /// Advances the state machine of an event-driven sensor (unless asked to
    /// report the current state) and returns the payload plus whether more
    /// events can follow.
    fn event_payload(&mut self, change: bool) -> (Payload, bool) {
        let rng = &mut self.rng;
        match &mut self.model {
            Model::Screen { on } => {
                if change {
                    *on = !*on;
                }
                let status = if *on {
                    ScreenState::On
                } else {
                    ScreenState::Off
                };
                (Payload::ScreenStatus(ScreenStatusData { status }), true)
            }
            Model::Activity { current } => {
                if change {
                    let others: Vec<Activity> = Activity::ALL
                        .iter()
                        .copied()
                        .filter(|a| a != current)
                        .collect();
                    *current = others[rng.random_range(0..others.len())];
                }
                let confidence = Confidence::ALL[rng.random_range(0..Confidence::ALL.len())];
                (
                    Payload::MotionActivity(MotionActivityData {
                        activity: *current,
                        confidence,
                    }),
                    true,
                )
            }
            Model::Pedometer { steps, distance } => {
                if change {
                    let n: u64 = rng.random_range(10..=60);
                    *steps += n;
                    *distance += n as f64 * rng.random_range(0.65..0.85);
                }
                (
                    Payload::Pedometer(PedometerData {
                        step_count: *steps,
                        distance_meters: *distance,
                    }),
                    true,
                )
            }
            Model::Battery { percent } => {
                if change && *percent > 0 {
                    *percent -= 1;
                }
                (
                    Payload::Battery(BatteryData {
                        level: f64::from(*percent) / 100.0,
                        state: BatteryState::Unplugged,
                    }),
                    *percent > 0,
                )
            }
            _ => unreachable!("clocked model on an event schedule"),
        }
    }

    fn apply_pending(&mut self) {
        if let Some(cfg) = self.pending.take() {
            let new_rate = cfg.tick_rate_hz();
            let silent = cfg.sensor_type.is_beacon() && !cfg.scans();
            self.config = cfg;
            match (&mut self.timing, new_rate) {
                _ if silent => self.timing = Timing::Silent,
                (Timing::Periodic(p), Some(rate)) => p.queue_rate(rate),
                (Timing::Silent, _) => self.timing = timing_for(&self.config),
                _ => {}
            }
        }
    }
}

impl Driver for SyntheticDriver {
    fn sensor_type(&self) -> SensorType {
        self.sensor
    }

    fn start(&mut self, at_nanos: u64) {
        self.apply_pending();
        match &mut self.timing {
            Timing::Periodic(p) => p.start(at_nanos),
            Timing::Events {
                next,
                report_current,
            } => {
                *next = Some(at_nanos);
                *report_current = true;
            }
            Timing::Silent => {}
        }
    }

    fn next_timestamp(&self) -> Option<u64> {
        match &self.timing {
            Timing::Periodic(p) => Some(p.due()),
            Timing::Events { next, .. } => *next,
            Timing::Silent => None,
        }
    }

    fn produce(&mut self) -> Option<SensorSample> {
        let due = self.next_timestamp()?;
        if self.pending.is_some() {
            let rate_change = self.pending.as_ref().and_then(SensorConfig::tick_rate_hz);
            let silent = self
                .pending
                .as_ref()
                .is_some_and(|c| c.sensor_type.is_beacon() && !c.scans());
            self.config = self.pending.take().expect("checked");
            if silent {
                self.timing = Timing::Silent;
                return None;
            }
            if let (Timing::Periodic(p), Some(rate)) = (&mut self.timing, rate_change) {
                p.queue_rate(rate);
            }
        }
        match &mut self.timing {
            Timing::Periodic(p) => {
                let (t, _) = p.fire();
                let payload = self.periodic_payload(t);
                Some(SensorSample::from_payload(t, payload))
            }
            Timing::Events { report_current, .. } => {
                let change = !*report_current;
                *report_current = false;
                let (payload, more) = self.event_payload(change);
                let next = if more {
                    Some(due + self.dwell_nanos())
                } else {
                    None
                };
                if let Timing::Events { next: n, .. } = &mut self.timing {
                    *n = next;
                }
                Some(SensorSample::from_payload(due, payload))
            }
            Timing::Silent => None,
        }
    }

    fn reconfigure(&mut self, config: &SensorConfig) {
        self.pending = Some(config.clone());
    }
}

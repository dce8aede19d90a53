//! Sensor registry: registration, configuration, subscription and the
//! start/stop lifecycle, all on one monotonic session time base.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, MutexGuard};

use thiserror::Error;

use crate::clock::{ClockRegression, SessionClock, TimeSource};
use crate::config::{InvalidConfig, SensorConfig};
use crate::drivers::{derive_seed, Driver, DriverError, SyntheticDriver};
use crate::sample::SensorSample;
use crate::sensor::{Availability, PlatformProfile, SensorType};

/// Opaque registration token, unique for the lifetime of a manager.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SensorHandle(u64);

impl fmt::Display for SensorHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubscriptionId(u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensorState {
    Stopped,
    Running,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManagerError {
    #[error("SensorNotAvailable: {sensor} is {} on profile `{profile}`", availability.as_str())]
    SensorNotAvailable {
        sensor: SensorType,
        profile: String,
        availability: Availability,
    },
    #[error("AlreadyRegistered: {0} already has a registration")]
    AlreadyRegistered(SensorType),
    #[error("InvalidConfig: {0}")]
    InvalidConfig(#[from] InvalidConfig),
    #[error("UnknownHandle: {0}")]
    UnknownHandle(SensorHandle),
    #[error("TypeMismatch: handle is {expected}, config is {found}")]
    TypeMismatch {
        expected: SensorType,
        found: SensorType,
    },
    #[error("WrongState: {sensor} is {state:?}")]
    WrongState {
        sensor: SensorType,
        state: SensorState,
    },
    #[error("Reentrancy: registry called from inside a sample handler")]
    Reentrancy,
    #[error(transparent)]
    ClockRegression(#[from] ClockRegression),
    #[error("driver: {0}")]
    Driver(#[from] DriverError),
}

pub type Handler = Box<dyn FnMut(&SensorSample) + Send>;

/// Stream key shared by the fused motion outputs.
const DEVICE_MOTION_STREAM: u64 = 0x100;

struct Entry {
    sensor: SensorType,
    config: SensorConfig,
    driver: Box<dyn Driver>,
    state: SensorState,
    subscribers: Vec<(SubscriptionId, Handler)>,
    last_emitted: Option<u64>,
}

pub struct SensorManager {
    profile: PlatformProfile,
    time: Box<dyn TimeSource>,
    clock: SessionClock,
    seed: u64,
    next_handle: u64,
    next_subscription: u64,
    entries: BTreeMap<SensorHandle, Entry>,
}

thread_local! {
    static DISPATCHING: Cell<bool> = const { Cell::new(false) };
}

struct DispatchGuard;

impl DispatchGuard {
    fn enter() -> Self {
        DISPATCHING.with(|d| d.set(true));
        DispatchGuard
    }
}

impl Drop for DispatchGuard {
    fn drop(&mut self) {
        DISPATCHING.with(|d| d.set(false));
    }
}

fn in_dispatch() -> bool {
    DISPATCHING.with(Cell::get)
}

impl SensorManager {
    /// Starts a session: the session clock origin is the source's current
    /// monotonic reading.
    pub fn new(profile: PlatformProfile, time: Box<dyn TimeSource>, seed: u64) -> Self {
        let clock = SessionClock::start(time.as_ref());
        SensorManager {
            profile,
            time,
            clock,
            seed,
            next_handle: 1,
            next_subscription: 1,
            entries: BTreeMap::new(),
        }
    }

    pub fn profile(&self) -> &PlatformProfile {
        &self.profile
    }

    pub fn clock(&self) -> &SessionClock {
        &self.clock
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Current session time.
    pub fn now(&self) -> Result<u64, ClockRegression> {
        self.clock.timestamp(self.time.monotonic_nanos())
    }

    /// Seed of the synthetic driver for `sensor`. Fused motion outputs share
    /// one when the profile fuses them.
    pub fn sensor_seed(&self, sensor: SensorType) -> u64 {
        if self.profile.fused_device_motion() && sensor.is_device_motion_component() {
            derive_seed(self.seed, DEVICE_MOTION_STREAM)
        } else {
            derive_seed(self.seed, sensor as u64)
        }
    }

    fn check_available(&self, config: &SensorConfig) -> Result<(), ManagerError> {
        let availability = self.profile.availability(config.sensor_type);
        let denied = match availability {
            Availability::Unavailable => true,
            Availability::ScanOnly => config.broadcasts(),
            Availability::Full => false,
        };
        if denied {
            return Err(ManagerError::SensorNotAvailable {
                sensor: config.sensor_type,
                profile: self.profile.name().to_owned(),
                availability,
            });
        }
        Ok(())
    }

    fn check_new(&self, sensor: SensorType, config: &SensorConfig) -> Result<(), ManagerError> {
        if config.sensor_type != sensor {
            return Err(ManagerError::TypeMismatch {
                expected: sensor,
                found: config.sensor_type,
            });
        }
        self.check_available(config)?;
        if self.entries.values().any(|e| e.sensor == sensor) {
            return Err(ManagerError::AlreadyRegistered(sensor));
        }
        config.validate()?;
        Ok(())
    }

    /// Registers `sensor` backed by a seeded synthetic driver.
    pub fn register(
        &mut self,
        sensor: SensorType,
        config: SensorConfig,
    ) -> Result<SensorHandle, ManagerError> {
        self.check_new(sensor, &config)?;
        let driver = SyntheticDriver::new(sensor, &config, self.sensor_seed(sensor))?;
        Ok(self.insert(config, Box::new(driver)))
    }

    /// Registers `sensor` backed by a caller-supplied driver, e.g. a replay.
    pub fn register_with_driver(
        &mut self,
        config: SensorConfig,
        driver: Box<dyn Driver>,
    ) -> Result<SensorHandle, ManagerError> {
        let sensor = driver.sensor_type();
        self.check_new(sensor, &config)?;
        Ok(self.insert(config, driver))
    }

    fn insert(&mut self, config: SensorConfig, driver: Box<dyn Driver>) -> SensorHandle {
        let handle = SensorHandle(self.next_handle);
        self.next_handle += 1;
        self.entries.insert(
            handle,
            Entry {
                sensor: config.sensor_type,
                config,
                driver,
                state: SensorState::Stopped,
                subscribers: Vec::new(),
                last_emitted: None,
            },
        );
        handle
    }

    fn entry(&self, handle: SensorHandle) -> Result<&Entry, ManagerError> {
        self.entries
            .get(&handle)
            .ok_or(ManagerError::UnknownHandle(handle))
    }

    fn entry_mut(&mut self, handle: SensorHandle) -> Result<&mut Entry, ManagerError> {
        self.entries
            .get_mut(&handle)
            .ok_or(ManagerError::UnknownHandle(handle))
    }

    pub fn sensor_type(&self, handle: SensorHandle) -> Result<SensorType, ManagerError> {
        Ok(self.entry(handle)?.sensor)
    }

    pub fn state(&self, handle: SensorHandle) -> Result<SensorState, ManagerError> {
        Ok(self.entry(handle)?.state)
    }

    pub fn config(&self, handle: SensorHandle) -> Result<&SensorConfig, ManagerError> {
        Ok(&self.entry(handle)?.config)
    }

    pub fn handles(&self) -> Vec<SensorHandle> {
        self.entries.keys().copied().collect()
    }

    pub fn handle_for(&self, sensor: SensorType) -> Option<SensorHandle> {
        self.entries
            .iter()
            .find(|(_, e)| e.sensor == sensor)
            .map(|(h, _)| *h)
    }

    /// Configurations of every registered sensor, in registration order.
    pub fn configs(&self) -> Vec<&SensorConfig> {
        self.entries.values().map(|e| &e.config).collect()
    }

    /// Swaps in a new configuration. A running sensor picks it up at its next
    /// scheduled sample; a stopped one on its next start.
    pub fn configure(
        &mut self,
        handle: SensorHandle,
        config: SensorConfig,
    ) -> Result<(), ManagerError> {
        let sensor = self.entry(handle)?.sensor;
        if config.sensor_type != sensor {
            return Err(ManagerError::TypeMismatch {
                expected: sensor,
                found: config.sensor_type,
            });
        }
        config.validate()?;
        self.check_available(&config)?;
        self.poll()?;
        let entry = self.entry_mut(handle)?;
        entry.driver.reconfigure(&config);
        entry.config = config;
        Ok(())
    }

    pub fn subscribe(
        &mut self,
        handle: SensorHandle,
        handler: impl FnMut(&SensorSample) + Send + 'static,
    ) -> Result<SubscriptionId, ManagerError> {
        self.entry(handle)?;
        // samples already due belong to the existing subscribers
        self.poll()?;
        let id = SubscriptionId(self.next_subscription);
        self.next_subscription += 1;
        self.entry_mut(handle)?
            .subscribers
            .push((id, Box::new(handler)));
        Ok(id)
    }

    /// Returns whether the subscription existed.
    pub fn unsubscribe(
        &mut self,
        handle: SensorHandle,
        id: SubscriptionId,
    ) -> Result<bool, ManagerError> {
        self.poll()?;
        let subs = &mut self.entry_mut(handle)?.subscribers;
        let before = subs.len();
        subs.retain(|(s, _)| *s != id);
        Ok(subs.len() != before)
    }

    pub fn start(&mut self, handle: SensorHandle) -> Result<(), ManagerError> {
        let entry = self.entry(handle)?;
        if entry.state != SensorState::Stopped {
            return Err(ManagerError::WrongState {
                sensor: entry.sensor,
                state: entry.state,
            });
        }
        self.poll()?;
        let now = self.now()?;
        let entry = self.entry(handle)?;
        let mut at = match entry.last_emitted {
            Some(last) => now.max(last + 1),
            None => now,
        };
        if let Some(t) = self.fused_sibling_tick(handle) {
            at = at.max(t);
        }
        let entry = self.entry_mut(handle)?;
        entry.driver.start(at);
        entry.state = SensorState::Running;
        Ok(())
    }

    /// Next tick of a running fused sibling on the same grid, so fused
    /// outputs share one schedule.
    fn fused_sibling_tick(&self, handle: SensorHandle) -> Option<u64> {
        let me = self.entries.get(&handle)?;
        if !(self.profile.fused_device_motion() && me.sensor.is_device_motion_component()) {
            return None;
        }
        self.entries
            .iter()
            .filter(|(h, e)| {
                **h != handle
                    && e.state == SensorState::Running
                    && e.sensor.is_device_motion_component()
                    && e.config.sample_rate_hz == me.config.sample_rate_hz
            })
            .filter_map(|(_, e)| e.driver.next_timestamp())
            .min()
    }

    /// Delivers everything due before now, then stops production.
    pub fn stop(&mut self, handle: SensorHandle) -> Result<(), ManagerError> {
        let entry = self.entry(handle)?;
        if entry.state != SensorState::Running {
            return Err(ManagerError::WrongState {
                sensor: entry.sensor,
                state: entry.state,
            });
        }
        self.poll()?;
        self.entry_mut(handle)?.state = SensorState::Stopped;
        Ok(())
    }

    pub fn deregister(&mut self, handle: SensorHandle) -> Result<(), ManagerError> {
        let entry = self.entry(handle)?;
        if entry.state != SensorState::Stopped {
            return Err(ManagerError::WrongState {
                sensor: entry.sensor,
                state: entry.state,
            });
        }
        self.entries.remove(&handle);
        Ok(())
    }

    /// Dispatches every sample with a timestamp before the current session
    /// time, in timestamp order across sensors. Returns how many samples
    /// were produced.
    pub fn poll(&mut self) -> Result<usize, ManagerError> {
        let now = self.now()?;
        let _guard = DispatchGuard::enter();
        let mut produced = 0;
        loop {
            let next = self
                .entries
                .iter()
                .filter(|(_, e)| e.state == SensorState::Running)
                .filter_map(|(h, e)| e.driver.next_timestamp().map(|t| (t, *h)))
                .filter(|(t, _)| *t < now)
                .min();
            let Some((_, handle)) = next else {
                break;
            };
            let entry = self
                .entries
                .get_mut(&handle)
                .expect("handle from iteration");
            let Some(sample) = entry.driver.produce() else {
                continue;
            };
            entry.last_emitted = Some(sample.timestamp_nanos);
            for (_, handler) in &mut entry.subscribers {
                handler(&sample);
            }
            produced += 1;
        }
        Ok(produced)
    }
}

/// Thread-safe wrapper. Handlers that call back into it get `Reentrancy`
/// instead of a deadlock.
#[derive(Clone)]
pub struct SharedSensorManager {
    inner: Arc<Mutex<SensorManager>>,
}

impl SharedSensorManager {
    pub fn new(manager: SensorManager) -> Self {
        SharedSensorManager {
            inner: Arc::new(Mutex::new(manager)),
        }
    }

    fn lock(&self) -> Result<MutexGuard<'_, SensorManager>, ManagerError> {
        if in_dispatch() {
            return Err(ManagerError::Reentrancy);
        }
        Ok(self.inner.lock().unwrap_or_else(|p| p.into_inner()))
    }

    /// Runs `f` with exclusive access to the manager.
    pub fn with<R>(
        &self,
        f: impl FnOnce(&mut SensorManager) -> Result<R, ManagerError>,
    ) -> Result<R, ManagerError> {
        f(&mut *self.lock()?)
    }

    pub fn register(
        &self,
        sensor: SensorType,
        config: SensorConfig,
    ) -> Result<SensorHandle, ManagerError> {
        self.lock()?.register(sensor, config)
    }

    pub fn configure(
        &self,
        handle: SensorHandle,
        config: SensorConfig,
    ) -> Result<(), ManagerError> {
        self.lock()?.configure(handle, config)
    }

    pub fn subscribe(
        &self,
        handle: SensorHandle,
        handler: impl FnMut(&SensorSample) + Send + 'static,
    ) -> Result<SubscriptionId, ManagerError> {
        self.lock()?.subscribe(handle, handler)
    }

    pub fn start(&self, handle: SensorHandle) -> Result<(), ManagerError> {
        self.lock()?.start(handle)
    }

    pub fn stop(&self, handle: SensorHandle) -> Result<(), ManagerError> {
        self.lock()?.stop(handle)
    }

    pub fn deregister(&self, handle: SensorHandle) -> Result<(), ManagerError> {
        self.lock()?.deregister(handle)
    }

    pub fn poll(&self) -> Result<usize, ManagerError> {
        self.lock()?.poll()
    }
}

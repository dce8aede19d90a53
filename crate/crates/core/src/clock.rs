//! Session time-base.
//!
//! Sample timestamps come from a monotonic counter, never from the wall
//! clock. The wall clock is read once, at session start, and only recorded.

use std::sync::atomic::{AtomicI64, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const NANOS_PER_SECOND: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("ClockRegression: monotonic reading {now} is below the session origin {origin}")]
pub struct ClockRegression {
    pub origin: u64,
    pub now: u64,
}

/// Where the manager reads time from.
pub trait TimeSource: Send + Sync {
    /// Nanoseconds from an arbitrary fixed point; never decreases.
    fn monotonic_nanos(&self) -> u64;
    /// Current wall-clock time as nanoseconds since the Unix epoch.
    fn wall_clock_unix_nanos(&self) -> i64;
}

/// The host's monotonic clock.
#[derive(Debug, Clone)]
pub struct SystemTimeSource {
    base: Instant,
}

impl SystemTimeSource {
    pub fn new() -> Self {
        SystemTimeSource {
            base: Instant::now(),
        }
    }
}

impl Default for SystemTimeSource {
    fn default() -> Self {
        Self::new()
    }
}

impl TimeSource for SystemTimeSource {
    fn monotonic_nanos(&self) -> u64 {
        self.base.elapsed().as_nanos() as u64
    }

    fn wall_clock_unix_nanos(&self) -> i64 {
        match SystemTime::now().duration_since(UNIX_EPOCH) {
            Ok(d) => d.as_nanos() as i64,
            Err(e) => -(e.duration().as_nanos() as i64),
        }
    }
}

#[derive(Debug, Default)]
struct SimulatedState {
    monotonic: AtomicU64,
    wall: AtomicI64,
}

/// A clock advanced by hand. Clones share state, so a test can keep one
/// copy to drive time while the manager holds another.
#[derive(Debug, Clone, Default)]
pub struct SimulatedTimeSource {
    state: Arc<SimulatedState>,
}

impl SimulatedTimeSource {
    pub fn new(monotonic_start: u64, wall_start_unix_nanos: i64) -> Self {
        let s = SimulatedTimeSource::default();
        s.state.monotonic.store(monotonic_start, Ordering::SeqCst);
        s.state.wall.store(wall_start_unix_nanos, Ordering::SeqCst);
        s
    }

    /// Moves both clocks forward.
    pub fn advance(&self, nanos: u64) {
        self.state.monotonic.fetch_add(nanos, Ordering::SeqCst);
        self.state.wall.fetch_add(nanos as i64, Ordering::SeqCst);
    }

    /// Shifts the wall clock alone, as a user or NTP would.
    pub fn jump_wall_clock(&self, delta_nanos: i64) {
        self.state.wall.fetch_add(delta_nanos, Ordering::SeqCst);
    }
}

impl TimeSource for SimulatedTimeSource {
    fn monotonic_nanos(&self) -> u64 {
        self.state.monotonic.load(Ordering::SeqCst)
    }

    fn wall_clock_unix_nanos(&self) -> i64 {
        self.state.wall.load(Ordering::SeqCst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionClock {
    pub monotonic_origin_nanos: u64,
    pub wall_clock_epoch_unix_nanos: i64,
}

impl SessionClock {
    pub fn start(source: &dyn TimeSource) -> Self {
        SessionClock {
            monotonic_origin_nanos: source.monotonic_nanos(),
            wall_clock_epoch_unix_nanos: source.wall_clock_unix_nanos(),
        }
    }

    pub fn timestamp(&self, monotonic_now_nanos: u64) -> Result<u64, ClockRegression> {
        monotonic_now_nanos
            .checked_sub(self.monotonic_origin_nanos)
            .ok_or(ClockRegression {
                origin: self.monotonic_origin_nanos,
                now: monotonic_now_nanos,
            })
    }
}

/// Session-relative timestamp as (nanoseconds, seconds).
pub fn session_timestamp(
    clock: &SessionClock,
    monotonic_now_nanos: u64,
) -> Result<(u64, f64), ClockRegression> {
    let nanos = clock.timestamp(monotonic_now_nanos)?;
    Ok((nanos, nanos_to_seconds(nanos)))
}

pub fn nanos_to_seconds(nanos: u64) -> f64 {
    nanos as f64 / NANOS_PER_SECOND as f64
}

/// Nearest whole nanosecond to `seconds`.
pub fn seconds_to_nanos(seconds: f64) -> u64 {
    (seconds * NANOS_PER_SECOND as f64).round() as u64
}

/// Renders nanoseconds as seconds with exactly nine decimals, without going
/// through floating point.
pub fn format_seconds(nanos: u64) -> String {
    format!(
        "{}.{:09}",
        nanos / NANOS_PER_SECOND,
        nanos % NANOS_PER_SECOND
    )
}

/// Exact inverse of [`format_seconds`]: a plain decimal with at most nine
/// fractional digits.
pub fn parse_seconds(text: &str) -> Option<u64> {
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if whole.is_empty() || frac.len() > 9 || !digits(whole) || !digits(frac) {
        return None;
    }
    let mut nanos: u64 = 0;
    for (i, b) in frac.bytes().enumerate() {
        nanos += u64::from(b - b'0') * 10u64.pow(8 - i as u32);
    }
    whole
        .parse::<u64>()
        .ok()?
        .checked_mul(NANOS_PER_SECOND)?
        .checked_add(nanos)
}

/// Whether a floating-point seconds value is the nearest double to `nanos`
/// seconds, give or take rounding.
pub fn seconds_match(seconds: f64, nanos: u64) -> bool {
    let exact = nanos_to_seconds(nanos);
    (seconds - exact).abs() <= 1e-9_f64.max(exact.abs() * 4.0 * f64::EPSILON)
}

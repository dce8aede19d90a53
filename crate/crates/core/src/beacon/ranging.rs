use std::collections::BTreeMap;

use super::distance::{PathLossModel, ProximityEstimate, ZoneThresholds};
use super::{BeaconId, BeaconSighting};

const WINDOW_NANOS: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RssiAggregation {
    #[default]
    Mean,
    Median,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RangingConfig {
    pub model: PathLossModel,
    pub aggregation: RssiAggregation,
    pub zones: ZoneThresholds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangedBeacon {
    pub id: BeaconId,
    pub rssi: f64,
    pub sightings: usize,
    pub estimate: ProximityEstimate,
}

fn aggregate(values: &mut [f64], how: RssiAggregation) -> f64 {
    match how {
        RssiAggregation::Mean => values.iter().sum::<f64>() / values.len() as f64,
        RssiAggregation::Median => {
            values.sort_by(f64::total_cmp);
            let mid = values.len() / 2;
            if values.len().is_multiple_of(2) {
                0.5 * (values[mid - 1] + values[mid])
            } else {
                values[mid]
            }
        }
    }
}

/// Groups one window's sightings by beacon identity and turns each group's
/// aggregated RSSI into a distance estimate. Output is sorted by identity.
/// Frames without an identity (telemetry) are ignored.
pub fn range_beacons<'a>(
    sightings: impl IntoIterator<Item = &'a BeaconSighting>,
    config: &RangingConfig,
) -> Vec<RangedBeacon> {
    let mut groups: BTreeMap<BeaconId, (Option<f64>, Vec<f64>)> = BTreeMap::new();
    for s in sightings {
        let Some(id) = s.frame.identity() else {
            continue;
        };
        let entry = groups
            .entry(id)
            .or_insert_with(|| (s.frame.reference_power(), Vec::new()));
        entry.1.push(f64::from(s.rssi));
    }
    groups
        .into_iter()
        .map(|(id, (reference, mut rssis))| {
            let rssi = aggregate(&mut rssis, config.aggregation);
            let estimate = match reference {
                Some(reference) => ProximityEstimate::from_distance(
                    config.model.distance(rssi, reference),
                    &config.zones,
                ),
                None => ProximityEstimate::unknown(),
            };
            RangedBeacon {
                id,
                rssi,
                sightings: rssis.len(),
                estimate,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangingWindow {
    pub index: u64,
    pub start_nanos: u64,
    pub end_nanos: u64,
    pub beacons: Vec<RangedBeacon>,
}

/// Streaming 1 Hz ranging over session time.
///
/// Window `k` covers `[origin + k s, origin + (k+1) s)` and is emitted once
/// session time reaches its end, so a session of `T` seconds yields
/// `floor(T)` windows (empty windows included).
#[derive(Debug, Clone)]
pub struct Ranger {
    config: RangingConfig,
    origin: u64,
    next_index: u64,
    pending: Vec<BeaconSighting>,
}

impl Ranger {
    pub fn new(config: RangingConfig, origin_nanos: u64) -> Self {
        Ranger {
            config,
            origin: origin_nanos,
            next_index: 0,
            pending: Vec::new(),
        }
    }

    fn window_end(&self, index: u64) -> u64 {
        self.origin + (index + 1) * WINDOW_NANOS
    }

    /// Adds a sighting; returns any windows that closed before it.
    pub fn push(&mut self, sighting: BeaconSighting) -> Vec<RangingWindow> {
        let closed = self.advance_to(sighting.timestamp_nanos);
        if sighting.timestamp_nanos < self.origin + self.next_index * WINDOW_NANOS {
            log::debug!("dropping sighting from an already closed ranging window");
        } else {
            self.pending.push(sighting);
        }
        closed
    }

    /// Closes every window ending at or before `now_nanos`.
    pub fn advance_to(&mut self, now_nanos: u64) -> Vec<RangingWindow> {
        let mut out = Vec::new();
        while self.window_end(self.next_index) <= now_nanos {
            let end = self.window_end(self.next_index);
            let (inside, later): (Vec<_>, Vec<_>) = self
                .pending
                .drain(..)
                .partition(|s| s.timestamp_nanos < end);
            self.pending = later;
            out.push(RangingWindow {
                index: self.next_index,
                start_nanos: end - WINDOW_NANOS,
                end_nanos: end,
                beacons: range_beacons(&inside, &self.config),
            });
            self.next_index += 1;
        }
        out
    }
}

mod fixtures;

use sensekit_core::beacon::{BeaconFrame, EddystoneFrame, EddystoneUid, IBeaconFrame};
use sensekit_core::clock::SimulatedTimeSource;
use sensekit_core::config::BeaconRole;
use sensekit_core::{
    is_sensor_available, Availability, ManagerError, PlatformProfile, SensorConfig, SensorManager,
    SensorType,
};

fn manager(profile: &PlatformProfile) -> SensorManager {
    SensorManager::new(profile.clone(), Box::new(SimulatedTimeSource::new(0, 0)), 0)
}

#[test]
fn matches_published_table() {
    for (name, ios, android) in fixtures::SUPPORTED_SENSORS {
        let sensor: SensorType = name.parse().unwrap();
        for (profile, cell) in [
            (PlatformProfile::ios(), ios),
            (PlatformProfile::android(), android),
        ] {
            assert_eq!(
                is_sensor_available(sensor, &profile).as_str(),
                fixtures::cell_mode(cell),
                "{name} on {}",
                profile.name()
            );
        }
    }
}

fn identity_for(sensor: SensorType) -> BeaconFrame {
    match sensor {
        SensorType::IBeaconProximity => BeaconFrame::IBeacon(IBeaconFrame {
            uuid: uuid::Uuid::nil(),
            major: 1,
            minor: 1,
            measured_power: -59,
        }),
        _ => BeaconFrame::Eddystone(EddystoneFrame::Uid(EddystoneUid {
            tx_power_at_0m: -20,
            namespace: [1; 10],
            instance: [2; 6],
        })),
    }
}

#[test]
fn registration_follows_availability() {
    for profile in [PlatformProfile::ios(), PlatformProfile::android()] {
        for sensor in SensorType::ALL {
            let availability = profile.availability(sensor);
            let result = manager(&profile).register(sensor, SensorConfig::default_for(sensor));
            assert_eq!(
                result.is_ok(),
                availability != Availability::Unavailable,
                "{sensor}"
            );
            if sensor.is_beacon() {
                let cfg = SensorConfig::default_for(sensor)
                    .with_roles([BeaconRole::Scan, BeaconRole::Broadcast])
                    .with_identity(identity_for(sensor));
                let result = manager(&profile).register(sensor, cfg);
                match availability {
                    Availability::Full => assert!(result.is_ok(), "{sensor}: {result:?}"),
                    _ => assert!(
                        matches!(result, Err(ManagerError::SensorNotAvailable { .. })),
                        "{sensor}"
                    ),
                }
            }
        }
    }
}

#[test]
fn profile_file_round_trip() {
    for profile in [PlatformProfile::ios(), PlatformProfile::android()] {
        let parsed = PlatformProfile::parse(profile.name(), &profile.to_text()).unwrap();
        for sensor in SensorType::ALL {
            assert_eq!(parsed.availability(sensor), profile.availability(sensor));
        }
    }
    assert!(PlatformProfile::parse("x", "Barometer=full\n").is_err());
}

//! Trip-level preparation: privacy rounding and origin-destination aggregation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stats::{median, sample_sd};

pub const FARE_GRAIN: f64 = 2.50;
pub const MINUTES_GRAIN: f64 = 15.0;
/// Pairs need strictly more than 50 trips to be kept.
pub const DEFAULT_MIN_TRIPS: usize = 51;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TripRecord {
    pub origin_id: String,
    pub destination_id: String,
    pub fare: f64,
    pub distance: f64,
    pub duration: f64,
    pub day_index: i64,
}

/// One retained origin-destination pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OdAggregate {
    pub origin: String,
    pub destination: String,
    pub trips_per_day: f64,
    pub fare_median: f64,
    pub fare_sd: f64,
    pub dist_median: f64,
    pub dist_sd: f64,
    pub dur_median: f64,
    pub dur_sd: f64,
}

fn snap(value: f64, grain: f64) -> f64 {
    // exact midpoints go up
    libm::floor(value / grain + 0.5) * grain
}

/// Snaps a fare to the nearest $2.50 and a duration to the nearest 15 minutes.
pub fn privacy_round(fare: f64, minutes: f64) -> Result<(f64, f64)> {
    if !(fare >= 0.0) || !(minutes >= 0.0) || !fare.is_finite() || !minutes.is_finite() {
        return Err(Error::arg("fare and minutes must be finite and non-negative"));
    }
    Ok((snap(fare, FARE_GRAIN), snap(minutes, MINUTES_GRAIN)))
}

/// Groups trips by (origin, destination), keeps pairs with at least
/// `min_trips` trips, and summarises each pair. Output is ordered by
/// (origin, destination).
pub fn aggregate_od(trips: &[TripRecord], study_days: usize, min_trips: usize) -> Result<Vec<OdAggregate>> {
    if study_days == 0 {
        return Err(Error::arg("study_days must be at least 1"));
    }
    if min_trips < 2 {
        return Err(Error::arg("min_trips must be at least 2 for a sample standard deviation"));
    }
    let mut pairs: BTreeMap<(&str, &str), Vec<&TripRecord>> = BTreeMap::new();
    for t in trips {
        if !(t.fare >= 0.0 && t.distance >= 0.0 && t.duration >= 0.0) {
            return Err(Error::arg("trip fare, distance and duration must be non-negative"));
        }
        pairs
            .entry((t.origin_id.as_str(), t.destination_id.as_str()))
            .or_default()
            .push(t);
    }
    Ok(pairs
        .into_iter()
        .filter(|(_, ts)| ts.len() >= min_trips)
        .map(|((o, d), ts)| {
            let fares: Vec<f64> = ts.iter().map(|t| t.fare).collect();
            let dists: Vec<f64> = ts.iter().map(|t| t.distance).collect();
            let durs: Vec<f64> = ts.iter().map(|t| t.duration).collect();
            OdAggregate {
                origin: o.into(),
                destination: d.into(),
                trips_per_day: ts.len() as f64 / study_days as f64,
                fare_median: median(&fares),
                fare_sd: sample_sd(&fares),
                dist_median: median(&dists),
                dist_sd: sample_sd(&dists),
                dur_median: median(&durs),
                dur_sd: sample_sd(&durs),
            }
        })
        .collect())
}

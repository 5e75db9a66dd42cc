//! Adapter for GeoLife `.plt` trajectory files.
//!
//! A `.plt` file has six header lines followed by records of seven fields:
//! latitude, longitude, a zero flag, altitude in feet, days since
//! 1899-12-30 (fractional), date, and time. Positions are projected onto a
//! local plane with an equirectangular projection around the first record.
//! GeoLife logs sometimes repeat timestamps; such records are dropped.

use std::io::BufRead;

use crate::mobility_forecast::trajectory::{TrajPoint, Trajectory};
use crate::{Error, Result};

pub const HEADER_LINES: usize = 6;
const EARTH_RADIUS_M: f64 = 6_371_000.0;
const SECONDS_PER_DAY: f64 = 86_400.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoRecord {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub days: f64,
}

pub fn parse_record(line: &str, line_no: usize) -> Result<GeoRecord> {
    let fields: Vec<&str> = line.trim().split(',').collect();
    if fields.len() != 7 {
        return Err(Error::Parse { line: line_no, message: format!("expected 7 fields, got {}", fields.len()) });
    }
    let num = |k: usize, name: &str| -> Result<f64> {
        fields[k]
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse { line: line_no, message: format!("invalid {name} '{}'", fields[k]) })
    };
    Ok(GeoRecord { lat_deg: num(0, "latitude")?, lon_deg: num(1, "longitude")?, days: num(4, "day count")? })
}

/// Projects records into meters relative to the first one; time in seconds
/// since the first record.
pub fn project(records: &[GeoRecord]) -> Trajectory {
    let Some(origin) = records.first() else {
        return Trajectory::default();
    };
    let cos_lat = origin.lat_deg.to_radians().cos();
    let mut points: Vec<TrajPoint> = Vec::with_capacity(records.len());
    for r in records {
        let t = (r.days - origin.days) * SECONDS_PER_DAY;
        if points.last().is_some_and(|p| !(t > p.t)) {
            continue;
        }
        points.push(TrajPoint {
            t,
            x: EARTH_RADIUS_M * (r.lon_deg - origin.lon_deg).to_radians() * cos_lat,
            y: EARTH_RADIUS_M * (r.lat_deg - origin.lat_deg).to_radians(),
        });
    }
    Trajectory { points }
}

/// Reads one `.plt` file into a trajectory.
pub fn read_plt(reader: impl BufRead) -> Result<Trajectory> {
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if idx < HEADER_LINES || line.trim().is_empty() {
            continue;
        }
        records.push(parse_record(&line, idx + 1)?);
    }
    Ok(project(&records))
}

//! Stage 1 of placement: the altitude that maximises the coverage radius.

use serde::{Deserialize, Serialize};

use crate::atg_channel::{coverage_radius, AtgEnvironment, RadioConfig};
use crate::search::{grid_then_golden, linspace};
use crate::{Error, Result};

/// Altitudes whose radii differ by less than this are treated as equal, and
/// the lower one wins.
pub const RADIUS_EQUIVALENCE_M: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AltitudeSearchConfig {
    pub h_min: f64,
    pub h_max: f64,
    pub coarse_grid: usize,
    pub refine_tol: f64,
}

impl Default for AltitudeSearchConfig {
    fn default() -> Self {
        Self { h_min: 10.0, h_max: 1000.0, coarse_grid: 64, refine_tol: 0.1 }
    }
}

impl AltitudeSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h_min > 0.0 && self.h_min < self.h_max && self.h_max.is_finite()) {
            return Err(Error::Configuration(format!(
                "altitude search needs 0 < h_min < h_max, got [{}, {}]",
                self.h_min, self.h_max
            )));
        }
        if self.coarse_grid < 8 {
            return Err(Error::Configuration(format!(
                "altitude coarse grid needs >= 8 points, got {}",
                self.coarse_grid
            )));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::Configuration("altitude refine_tol must be > 0".into()));
        }
        Ok(())
    }

    /// The coarse grid altitudes.
    pub fn grid(&self) -> Vec<f64> {
        linspace(self.h_min, self.h_max, self.coarse_grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalAltitude {
    pub altitude: f64,
    /// Coverage radius at `altitude`; the stage-2 radius limit.
    pub max_radius: f64,
}

/// Coarse grid over `[h_min, h_max]` followed by golden-section refinement
/// around the best grid cell.
pub fn optimal_altitude(
    env: &AtgEnvironment,
    radio: &RadioConfig,
    search: &AltitudeSearchConfig,
) -> Result<OptimalAltitude> {
    search.validate()?;
    let radius = |h: f64| coverage_radius(h, env, radio);
    if search.grid().iter().all(|&h| radius(h) <= 0.0) {
        return Err(Error::NoFeasibleAltitude);
    }
    let (altitude, max_radius) = grid_then_golden(
        radius,
        search.h_min,
        search.h_max,
        search.coarse_grid,
        search.refine_tol,
        RADIUS_EQUIVALENCE_M,
    );
    Ok(OptimalAltitude { altitude, max_radius })
}

/// `(h, coverage_radius(h))` for every requested altitude, in input order.
pub fn coverage_profile(env: &AtgEnvironment, radio: &RadioConfig, h_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if let Some(bad) = h_values.iter().find(|&&h| !(h > 0.0 && h.is_finite())) {
        return Err(Error::Domain(format!("profile altitudes must be > 0, got {bad}")));
    }
    Ok(h_values.iter().map(|&h| (h, coverage_radius(h, env, radio))).collect())
}

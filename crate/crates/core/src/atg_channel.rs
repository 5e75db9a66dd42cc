//! Air-to-ground channel primitives.
//!
//! Mean path loss follows the elevation-dependent LoS/NLoS mixture model:
//!
//! ```text
//! P_LoS(θ) = 1 / (1 + a·exp(−b·(θ − a)))
//! PL(h, r) = FSPL(√(h² + r²)) + P_LoS·η_LoS + (1 − P_LoS)·η_NLoS
//! ```
//!
//! with θ in degrees. Links are noise limited: a single UAV-BS has no
//! co-channel interferer, so SNR stands in for SINR.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Largest radius the coverage search will return (m).
pub const MAX_COVERAGE_RADIUS_M: f64 = 1e6;

/// Bisection stops when the bracket is narrower than this (m).
pub const RADIUS_TOLERANCE_M: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtgEnvironment {
    pub name: String,
    /// Sigmoid offset.
    pub a: f64,
    /// Sigmoid steepness per degree.
    pub b: f64,
    /// Mean excess loss of LoS links (dB).
    pub eta_los: f64,
    /// Mean excess loss of NLoS links (dB).
    pub eta_nlos: f64,
}

impl AtgEnvironment {
    pub fn new(name: impl Into<String>, a: f64, b: f64, eta_los: f64, eta_nlos: f64) -> Result<Self> {
        let env = Self { name: name.into(), a, b, eta_los, eta_nlos };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() || !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::Configuration(format!(
                "environment '{}' needs finite a and b > 0",
                self.name
            )));
        }
        if !(self.eta_los >= 0.0 && self.eta_nlos >= self.eta_los && self.eta_nlos.is_finite()) {
            return Err(Error::Configuration(format!(
                "environment '{}' needs eta_nlos >= eta_los >= 0",
                self.name
            )));
        }
        Ok(())
    }

    pub fn suburban() -> Self {
        Self { name: "suburban".into(), a: 4.88, b: 0.43, eta_los: 0.1, eta_nlos: 21.0 }
    }

    pub fn urban() -> Self {
        Self { name: "urban".into(), a: 9.61, b: 0.16, eta_los: 1.0, eta_nlos: 20.0 }
    }

    pub fn dense_urban() -> Self {
        Self { name: "dense-urban".into(), a: 12.08, b: 0.11, eta_los: 1.6, eta_nlos: 23.0 }
    }

    pub fn highrise_urban() -> Self {
        Self { name: "highrise-urban".into(), a: 27.23, b: 0.08, eta_los: 2.3, eta_nlos: 34.0 }
    }

    /// Looks up a named preset.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "suburban" => Some(Self::suburban()),
            "urban" => Some(Self::urban()),
            "dense-urban" | "dense_urban" => Some(Self::dense_urban()),
            "highrise-urban" | "highrise_urban" | "highrise" => Some(Self::highrise_urban()),
            _ => None,
        }
    }

    pub fn presets() -> [Self; 4] {
        [Self::suburban(), Self::urban(), Self::dense_urban(), Self::highrise_urban()]
    }
}

/// Access-link radio parameters and backhaul limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    pub carrier_hz: f64,
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
    pub bandwidth_hz: f64,
    /// Maximum mean path loss at the coverage edge.
    pub pl_threshold_db: f64,
    pub backhaul_cap_bps: f64,
    /// Reported only; never constrains placement.
    pub backhaul_rtt_budget_ms: f64,
}

/// WiGig backhaul throughput measured on the prototype (bits/s).
pub const DEFAULT_BACKHAUL_CAP_BPS: f64 = 950e6;
/// Measured backhaul round-trip budget (ms).
pub const DEFAULT_BACKHAUL_RTT_MS: f64 = 5.0;

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 2e9,
            tx_power_dbm: 30.0,
            // Thermal noise over 20 MHz: -174 + 10·log10(20e6) ≈ -101 dBm.
            noise_dbm: -101.0,
            bandwidth_hz: 20e6,
            pl_threshold_db: 100.0,
            backhaul_cap_bps: DEFAULT_BACKHAUL_CAP_BPS,
            backhaul_rtt_budget_ms: DEFAULT_BACKHAUL_RTT_MS,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.carrier_hz) {
            return Err(Error::Configuration("radio carrier must be > 0".into()));
        }
        if !positive(self.bandwidth_hz) {
            return Err(Error::Configuration("radio bandwidth must be > 0".into()));
        }
        if !positive(self.backhaul_cap_bps) {
            return Err(Error::Configuration("backhaul cap must be > 0".into()));
        }
        if !(self.tx_power_dbm.is_finite() && self.noise_dbm.is_finite() && self.pl_threshold_db.is_finite())
        {
            return Err(Error::Configuration("radio powers and threshold must be finite".into()));
        }
        if !(self.backhaul_rtt_budget_ms >= 0.0) {
            return Err(Error::Configuration("backhaul rtt budget must be >= 0".into()));
        }
        Ok(())
    }
}

/// Elevation of the UE→UAV ray above the ground plane, in degrees.
pub fn elevation_angle(h: f64, r: f64) -> Result<f64> {
    if !(h >= 0.0 && r >= 0.0) {
        return Err(Error::Domain(format!("elevation needs h >= 0 and r >= 0, got ({h}, {r})")));
    }
    if h == 0.0 && r == 0.0 {
        return Err(Error::Domain("elevation undefined when h = r = 0".into()));
    }
    Ok(h.atan2(r).to_degrees())
}

pub fn p_los(theta_deg: f64, env: &AtgEnvironment) -> f64 {
    1.0 / (1.0 + env.a * (-env.b * (theta_deg - env.a)).exp())
}

/// Free-space path loss in dB.
pub fn fspl(d: f64, carrier_hz: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("fspl needs d > 0, got {d}")));
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * d * carrier_hz / SPEED_OF_LIGHT).log10())
}

/// `20·log10(4π·f/c)`: the free-space loss at 1 m.
pub fn fspl_intercept(carrier_hz: f64) -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * carrier_hz / SPEED_OF_LIGHT).log10()
}

/// Mean air-to-ground path loss in dB for altitude `h` and ground distance `r`.
pub fn mean_path_loss(h: f64, r: f64, env: &AtgEnvironment, carrier_hz: f64) -> Result<f64> {
    let theta = elevation_angle(h, r)?;
    let p = p_los(theta, env);
    Ok(fspl(h.hypot(r), carrier_hz)? + p * env.eta_los + (1.0 - p) * env.eta_nlos)
}

pub fn snr_db(pl_db: f64, radio: &RadioConfig) -> f64 {
    radio.tx_power_dbm - pl_db - radio.noise_dbm
}

/// `log2(1 + snr)` in bits/s/Hz.
pub fn spectral_efficiency(snr_db: f64) -> f64 {
    (10f64.powf(snr_db / 10.0)).ln_1p() / std::f64::consts::LN_2
}

/// Shannon rate `w·log2(1 + 10^(snr_db/10))` in bits/s.
pub fn shannon_rate(w_hz: f64, snr_db: f64) -> f64 {
    if w_hz == 0.0 {
        return 0.0;
    }
    w_hz * spectral_efficiency(snr_db)
}

/// Largest ground distance at which mean path loss stays within the radio's
/// threshold. Returns 0 when even the point directly below is out of budget.
///
/// Mean loss is increasing in `r`, so the edge is bracketed by doubling and
/// then bisected; the feasible end of the final bracket is returned.
pub fn coverage_radius(h: f64, env: &AtgEnvironment, radio: &RadioConfig) -> f64 {
    let threshold = radio.pl_threshold_db;
    let loss = |r: f64| mean_path_loss(h, r, env, radio.carrier_hz).unwrap_or(f64::INFINITY);
    if !(h > 0.0) || loss(0.0) > threshold {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = h.max(1.0);
    while loss(hi) <= threshold {
        lo = hi;
        if hi >= MAX_COVERAGE_RADIUS_M {
            return MAX_COVERAGE_RADIUS_M;
        }
        hi = (hi * 2.0).min(MAX_COVERAGE_RADIUS_M);
    }
    while hi - lo > RADIUS_TOLERANCE_M {
        let mid = 0.5 * (lo + hi);
        if loss(mid) <= threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env_9_61() -> AtgEnvironment {
        AtgEnvironment::new("t", 9.61, 0.16, 1.0, 20.0).unwrap()
    }

    #[test]
    fn elevation_examples() {
        assert!((elevation_angle(100.0, 100.0).unwrap() - 45.0).abs() < 1e-12);
        assert!((elevation_angle(100.0, 0.0).unwrap() - 90.0).abs() < 1e-12);
        assert!((elevation_angle(100.0, 100.0 * 3f64.sqrt()).unwrap() - 30.0).abs() < 1e-12);
        assert!(elevation_angle(0.0, 0.0).is_err());
        assert!(elevation_angle(-1.0, 5.0).is_err());
    }

    #[test]
    fn p_los_examples() {
        let env = env_9_61();
        // At θ = a the exponent vanishes: 1 / (1 + a).
        assert!((p_los(9.61, &env) - 1.0 / 10.61).abs() < 1e-15);
        assert!((p_los(9.61, &env) - 0.0942).abs() < 1e-4);
        assert!(p_los(90.0, &env) >= 0.9999);
    }

    #[test]
    fn fspl_examples() {
        // 20·log10(4π·1000·2e9 / 2.99792458e8), evaluated by hand: 98.4684 dB.
        let v = fspl(1000.0, 2e9).unwrap();
        assert!((v - 98.4684).abs() < 1e-3, "{v}");
        let unit = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * 2e9);
        assert!(fspl(unit, 2e9).unwrap().abs() < 1e-12);
        assert!(fspl(0.0, 2e9).is_err());
        assert!(fspl(-3.0, 2e9).is_err());
    }

    #[test]
    fn mean_loss_mixture_collapse() {
        let env = AtgEnvironment::new("flat", 9.61, 0.16, 7.0, 7.0).unwrap();
        for &(h, r) in &[(10.0, 0.0), (100.0, 350.0), (400.0, 3.0)] {
            let d = f64::hypot(h, r);
            let expect = fspl(d, 2e9).unwrap() + 7.0;
            assert!((mean_path_loss(h, r, &env, 2e9).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_loss_straight_down() {
        let env = env_9_61();
        let p = p_los(90.0, &env);
        let expect = fspl(100.0, 2e9).unwrap() + p * 1.0 + (1.0 - p) * 20.0;
        assert!((mean_path_loss(100.0, 0.0, &env, 2e9).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn snr_and_rate_examples() {
        assert_eq!(shannon_rate(1e6, 0.0), 1e6);
        assert_eq!(shannon_rate(0.0, 30.0), 0.0);
        let radio = RadioConfig { tx_power_dbm: 30.0, noise_dbm: -90.0, ..RadioConfig::default() };
        let snr = snr_db(100.0, &radio);
        assert!((snr - 20.0).abs() < 1e-12);
        let rate = shannon_rate(1e6, snr);
        assert!((rate - 1e6 * 101f64.log2()).abs() < 1e-6);
        assert!((rate - 6.658e6).abs() < 1e3);
    }

    #[test]
    fn coverage_zero_when_infeasible() {
        let env = env_9_61();
        let radio = RadioConfig { pl_threshold_db: 60.0, ..RadioConfig::default() };
        assert_eq!(coverage_radius(100.0, &env, &radio), 0.0);
    }

    #[test]
    fn coverage_inverts_free_space() {
        let env = AtgEnvironment::new("fs", 9.61, 0.16, 0.0, 0.0).unwrap();
        let h = 120.0;
        let radio = RadioConfig {
            pl_threshold_db: fspl(f64::hypot(h, 200.0), 2e9).unwrap(),
            ..RadioConfig::default()
        };
        let r = coverage_radius(h, &env, &radio);
        assert!((r - 200.0).abs() <= 0.1, "{r}");
    }

    #[test]
    fn presets_are_valid_and_urban_like() {
        for env in AtgEnvironment::presets() {
            env.validate().unwrap();
            assert!(env.eta_nlos - env.eta_los >= 10.0);
            assert_eq!(AtgEnvironment::preset(&env.name), Some(env.clone()));
        }
        assert!(AtgEnvironment::preset("moon").is_none());
    }

    #[test]
    fn default_backhaul_constants() {
        let radio = RadioConfig::default();
        assert_eq!(radio.backhaul_cap_bps, 950e6);
        assert_eq!(radio.backhaul_rtt_budget_ms, 5.0);
    }
}

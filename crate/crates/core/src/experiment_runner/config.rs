//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! crowd.n_ues = 400
//! crowd.hotspot = 300,300,80,0.6
//! crowd.hotspot = 700,650,120,0.4
//! radio.bandwidth_hz = 20e6
//! ```
//!
//! Every key is `section.name`. `crowd.hotspot` and `demands.level` may repeat
//! and build lists; any other key may appear once. Missing keys take the
//! defaults of [`RunConfig::default`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::altitude_optimizer::AltitudeSearchConfig;
use crate::atg_channel::{AtgEnvironment, RadioConfig};
use crate::channel_learning::{LearningConfig, SampleGeometry};
use crate::geometry::Point2;
use crate::mobility_forecast::EsnConfig;
use crate::placement::Policy;
use crate::scenario::{validate_hotspots, validate_levels, DemandLevel, HotSpot, Region};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { key: String, line: usize },
    #[error("key '{key}' set twice (lines {first} and {second})")]
    Duplicate { key: String, first: usize, second: usize },
    #[error("line {line}: '{key}': {message}")]
    Type { key: String, line: usize, message: String },
    #[error("invalid '{key}': {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    /// The key path the error refers to, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Syntax { .. } => None,
            ConfigError::UnknownKey { key, .. }
            | ConfigError::Duplicate { key, .. }
            | ConfigError::Type { key, .. }
            | ConfigError::Invalid { key, .. } => Some(key),
        }
    }
}

type ConfigResult<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    NUes,
    Altitude,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub repetitions: usize,
    pub policies: Vec<Policy>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            variable: SweepVariable::NUes,
            values: vec![50.0, 100.0, 200.0, 400.0, 800.0],
            repetitions: 5,
            policies: vec![Policy::OnDemand, Policy::MaxCoverage],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrowdConfig {
    pub n_ues: usize,
    /// Crowd seed; `None` follows the run seed.
    pub seed: Option<u64>,
    pub hotspots: Vec<HotSpot>,
    /// Hotspot random-walk intensity, m/√s.
    pub drift_sigma: f64,
}

impl Default for CrowdConfig {
    fn default() -> Self {
        Self {
            n_ues: 200,
            seed: None,
            hotspots: vec![
                HotSpot::new(Point2::new(600.0, 640.0), 180.0, 0.5),
                HotSpot::new(Point2::new(1360.0, 1300.0), 260.0, 0.3),
                HotSpot::new(Point2::new(1000.0, 1000.0), 600.0, 0.2),
            ],
            drift_sigma: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavConfig {
    pub search: AltitudeSearchConfig,
    pub hover_endurance_s: f64,
    pub epoch_s: f64,
    pub policy: Policy,
}

impl Default for UavConfig {
    fn default() -> Self {
        Self {
            search: AltitudeSearchConfig::default(),
            hover_endurance_s: 1800.0,
            epoch_s: 60.0,
            policy: Policy::OnDemand,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningSection {
    pub config: LearningConfig,
    pub geometry: SampleGeometry,
    pub n_train: usize,
    pub n_test: usize,
    /// Offsets of the generating channel relative to the configured
    /// environment, which serves as the static baseline.
    pub los_offset_db: f64,
    pub nlos_offset_db: f64,
}

impl Default for LearningSection {
    fn default() -> Self {
        Self {
            config: LearningConfig::default(),
            geometry: SampleGeometry::default(),
            n_train: 10_000,
            n_test: 2_000,
            los_offset_db: 0.0,
            nlos_offset_db: 6.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsnSection {
    pub config: EsnConfig,
    /// Forecast steps.
    pub horizon: usize,
}

impl Default for EsnSection {
    fn default() -> Self {
        Self { config: EsnConfig::default(), horizon: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub region: Region,
    pub radio: RadioConfig,
    pub environment: AtgEnvironment,
    pub demands: Vec<DemandLevel>,
    pub crowd: CrowdConfig,
    pub uav: UavConfig,
    pub learning: LearningSection,
    pub esn: EsnSection,
    pub sweep: SweepSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            region: Region { x_min: 0.0, x_max: 2000.0, y_min: 0.0, y_max: 2000.0 },
            radio: RadioConfig::default(),
            environment: AtgEnvironment::urban(),
            demands: vec![
                DemandLevel { id: 1, min_rate: 1e6, fraction: 0.5 },
                DemandLevel { id: 2, min_rate: 2e6, fraction: 0.3 },
                DemandLevel { id: 3, min_rate: 4e6, fraction: 0.2 },
            ],
            crowd: CrowdConfig::default(),
            uav: UavConfig::default(),
            learning: LearningSection::default(),
            esn: EsnSection::default(),
            sweep: SweepSpec::default(),
        }
    }
}

impl RunConfig {
    pub fn crowd_seed(&self) -> u64 {
        self.crowd.seed.unwrap_or(self.seed)
    }

    /// Replaces the run seed; an explicit crowd seed is dropped so the crowd
    /// follows.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.crowd.seed = None;
        self
    }

    pub fn validate(&self) -> ConfigResult<()> {
        let invalid = |key: &str, message: String| Err(ConfigError::Invalid { key: key.into(), message });
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                invalid(key, format!("must be a finite number > 0, got {v}"))
            }
        };
        let finite = |key: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                invalid(key, format!("must be finite, got {v}"))
            }
        };

        let r = &self.region;
        for (key, v) in [
            ("region.x_min", r.x_min),
            ("region.x_max", r.x_max),
            ("region.y_min", r.y_min),
            ("region.y_max", r.y_max),
        ] {
            finite(key, v)?;
        }
        if r.x_min >= r.x_max {
            return invalid("region.x_max", format!("must exceed region.x_min ({} >= {})", r.x_min, r.x_max));
        }
        if r.y_min >= r.y_max {
            return invalid("region.y_max", format!("must exceed region.y_min ({} >= {})", r.y_min, r.y_max));
        }

        let radio = &self.radio;
        positive("radio.carrier_hz", radio.carrier_hz)?;
        finite("radio.tx_power_dbm", radio.tx_power_dbm)?;
        finite("radio.noise_dbm", radio.noise_dbm)?;
        positive("radio.bandwidth_hz", radio.bandwidth_hz)?;
        finite("radio.pl_threshold_db", radio.pl_threshold_db)?;
        positive("radio.backhaul_cap_bps", radio.backhaul_cap_bps)?;
        if !(radio.backhaul_rtt_budget_ms >= 0.0 && radio.backhaul_rtt_budget_ms.is_finite()) {
            return invalid("radio.backhaul_rtt_budget_ms", format!("must be >= 0, got {}", radio.backhaul_rtt_budget_ms));
        }

        let env = &self.environment;
        if !(env.a >= 0.0 && env.a.is_finite()) {
            return invalid("environment.a", format!("must be >= 0, got {}", env.a));
        }
        if !(env.b >= 0.0 && env.b.is_finite()) {
            return invalid("environment.b", format!("must be >= 0, got {}", env.b));
        }
        finite("environment.eta_los_db", env.eta_los)?;
        finite("environment.eta_nlos_db", env.eta_nlos)?;
        env.validate().map_err(|e| ConfigError::Invalid { key: "environment".into(), message: e.to_string() })?;

        validate_levels(&self.demands)
            .map_err(|e| ConfigError::Invalid { key: "demands.level".into(), message: e.to_string() })?;
        validate_hotspots(&self.crowd.hotspots)
            .map_err(|e| ConfigError::Invalid { key: "crowd.hotspot".into(), message: e.to_string() })?;
        if self.crowd.hotspots.is_empty() && self.crowd.n_ues > 0 {
            return invalid("crowd.hotspot", "at least one hotspot is needed when crowd.n_ues > 0".into());
        }
        if !(self.crowd.drift_sigma >= 0.0 && self.crowd.drift_sigma.is_finite()) {
            return invalid("crowd.drift_sigma", format!("must be >= 0, got {}", self.crowd.drift_sigma));
        }

        let uav = &self.uav;
        positive("uav.h_min", uav.search.h_min)?;
        positive("uav.h_max", uav.search.h_max)?;
        if uav.search.h_min >= uav.search.h_max {
            return invalid("uav.h_max", format!("must exceed uav.h_min ({} >= {})", uav.search.h_min, uav.search.h_max));
        }
        if uav.search.coarse_grid < 8 {
            return invalid("uav.coarse_grid", format!("must be >= 8, got {}", uav.search.coarse_grid));
        }
        positive("uav.refine_tol", uav.search.refine_tol)?;
        positive("uav.hover_endurance_s", uav.hover_endurance_s)?;
        positive("uav.epoch_s", uav.epoch_s)?;

        let learning = &self.learning;
        positive("learning.outlier_z", learning.config.outlier_z)?;
        if learning.config.k_bins < 3 {
            return invalid("learning.k_bins", format!("must be >= 3, got {}", learning.config.k_bins));
        }
        if learning.config.min_samples < 10 {
            return invalid("learning.min_samples", format!("must be >= 10, got {}", learning.config.min_samples));
        }
        if !(learning.config.shadowing_sigma >= 0.0 && learning.config.shadowing_sigma.is_finite()) {
            return invalid("learning.shadowing_sigma", format!("must be >= 0, got {}", learning.config.shadowing_sigma));
        }
        let g = &learning.geometry;
        positive("learning.h_min", g.h_min)?;
        if g.h_max < g.h_min || !g.h_max.is_finite() {
            return invalid("learning.h_max", format!("must be >= learning.h_min, got {}", g.h_max));
        }
        if !(g.r_min >= 0.0) {
            return invalid("learning.r_min", format!("must be >= 0, got {}", g.r_min));
        }
        if g.r_max < g.r_min || !g.r_max.is_finite() {
            return invalid("learning.r_max", format!("must be >= learning.r_min, got {}", g.r_max));
        }
        if learning.n_train < 2 {
            return invalid("learning.n_train", format!("must be >= 2, got {}", learning.n_train));
        }
        if learning.n_test < 1 {
            return invalid("learning.n_test", "must be >= 1".into());
        }
        finite("learning.los_offset_db", learning.los_offset_db)?;
        finite("learning.nlos_offset_db", learning.nlos_offset_db)?;

        let esn = &self.esn.config;
        if esn.reservoir_size < 10 {
            return invalid("esn.reservoir_size", format!("must be >= 10, got {}", esn.reservoir_size));
        }
        if !(esn.spectral_radius > 0.0 && esn.spectral_radius < 1.0) {
            return invalid("esn.spectral_radius", format!("must be in (0, 1), got {}", esn.spectral_radius));
        }
        positive("esn.input_scale", esn.input_scale)?;
        if !(esn.leak > 0.0 && esn.leak <= 1.0) {
            return invalid("esn.leak", format!("must be in (0, 1], got {}", esn.leak));
        }
        if !(esn.ridge >= 0.0 && esn.ridge.is_finite()) {
            return invalid("esn.ridge", format!("must be >= 0, got {}", esn.ridge));
        }
        if !(esn.connectivity > 0.0 && esn.connectivity <= 1.0) {
            return invalid("esn.connectivity", format!("must be in (0, 1], got {}", esn.connectivity));
        }

        let sweep = &self.sweep;
        if sweep.values.is_empty() {
            return invalid("sweep.values", "must not be empty".into());
        }
        match sweep.variable {
            SweepVariable::NUes => {
                if let Some(v) = sweep.values.iter().find(|v| !(**v >= 1.0 && v.fract() == 0.0)) {
                    return invalid("sweep.values", format!("user counts must be positive integers, got {v}"));
                }
            }
            SweepVariable::Altitude => {
                if let Some(v) = sweep.values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                    return invalid("sweep.values", format!("altitudes must be > 0, got {v}"));
                }
            }
        }
        if sweep.repetitions < 1 {
            return invalid("sweep.repetitions", "must be >= 1".into());
        }
        if sweep.policies.is_empty() {
            return invalid("sweep.policies", "must not be empty".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

const REPEATABLE: [&str; 2] = ["crowd.hotspot", "demands.level"];

const SCALAR_KEYS: &[&str] = &[
    "run.seed",
    "region.x_min",
    "region.x_max",
    "region.y_min",
    "region.y_max",
    "radio.carrier_hz",
    "radio.tx_power_dbm",
    "radio.noise_dbm",
    "radio.bandwidth_hz",
    "radio.pl_threshold_db",
    "radio.backhaul_cap_bps",
    "radio.backhaul_rtt_budget_ms",
    "environment.preset",
    "environment.a",
    "environment.b",
    "environment.eta_los_db",
    "environment.eta_nlos_db",
    "crowd.n_ues",
    "crowd.seed",
    "crowd.drift_sigma",
    "uav.h_min",
    "uav.h_max",
    "uav.hover_endurance_s",
    "uav.epoch_s",
    "uav.coarse_grid",
    "uav.refine_tol",
    "uav.policy",
    "learning.outlier_z",
    "learning.k_bins",
    "learning.min_samples",
    "learning.shadowing_sigma",
    "learning.n_train",
    "learning.n_test",
    "learning.los_offset_db",
    "learning.nlos_offset_db",
    "learning.h_min",
    "learning.h_max",
    "learning.r_min",
    "learning.r_max",
    "esn.reservoir_size",
    "esn.spectral_radius",
    "esn.input_scale",
    "esn.leak",
    "esn.ridge",
    "esn.washout",
    "esn.connectivity",
    "esn.horizon",
    "sweep.variable",
    "sweep.values",
    "sweep.repetitions",
    "sweep.policies",
];

/// Every key the parser accepts.
pub fn known_keys() -> impl Iterator<Item = &'static str> {
    SCALAR_KEYS.iter().chain(REPEATABLE.iter()).copied()
}

struct Raw {
    scalars: BTreeMap<String, Entry>,
    lists: BTreeMap<String, Vec<Entry>>,
}

impl Raw {
    fn parse(text: &str) -> ConfigResult<Self> {
        let mut scalars: BTreeMap<String, Entry> = BTreeMap::new();
        let mut lists: BTreeMap<String, Vec<Entry>> = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("expected 'section.key = value', got '{content}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !key.contains('.') {
                return Err(ConfigError::Syntax { line, message: format!("key '{key}' needs a section prefix") });
            }
            let entry = Entry { value: value.to_string(), line };
            if REPEATABLE.contains(&key) {
                lists.entry(key.to_string()).or_default().push(entry);
            } else if SCALAR_KEYS.contains(&key) {
                if let Some(prev) = scalars.get(key) {
                    return Err(ConfigError::Duplicate { key: key.into(), first: prev.line, second: line });
                }
                scalars.insert(key.to_string(), entry);
            } else {
                return Err(ConfigError::UnknownKey { key: key.into(), line });
            }
        }
        Ok(Self { scalars, lists })
    }

    fn typed<T: std::str::FromStr>(&self, key: &str, what: &str) -> ConfigResult<Option<T>> {
        let Some(entry) = self.scalars.get(key) else {
            return Ok(None);
        };
        entry.value.parse::<T>().map(Some).map_err(|_| ConfigError::Type {
            key: key.into(),
            line: entry.line,
            message: format!("expected {what}, got '{}'", entry.value),
        })
    }

    fn f64(&self, key: &str, slot: &mut f64) -> ConfigResult<()> {
        if let Some(v) = self.typed::<f64>(key, "a number")? {
            *slot = v;
        }
        Ok(())
    }

    fn usize(&self, key: &str, slot: &mut usize) -> ConfigResult<()> {
        if let Some(v) = self.typed::<usize>(key, "a nonnegative integer")? {
            *slot = v;
        }
        Ok(())
    }

    fn tuple(entry: &Entry, key: &str, arity: usize, what: &str) -> ConfigResult<Vec<f64>> {
        let fields: Vec<&str> = entry.value.split(',').map(str::trim).collect();
        let type_error = || ConfigError::Type {
            key: key.into(),
            line: entry.line,
            message: format!("expected {what}, got '{}'", entry.value),
        };
        if fields.len() != arity {
            return Err(type_error());
        }
        fields.iter().map(|f| f.parse::<f64>().map_err(|_| type_error())).collect()
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> ConfigResult<RunConfig> {
    let raw = Raw::parse(text)?;
    let mut cfg = RunConfig::default();

    if let Some(seed) = raw.typed::<u64>("run.seed", "a nonnegative integer")? {
        cfg.seed = seed;
    }

    raw.f64("region.x_min", &mut cfg.region.x_min)?;
    raw.f64("region.x_max", &mut cfg.region.x_max)?;
    raw.f64("region.y_min", &mut cfg.region.y_min)?;
    raw.f64("region.y_max", &mut cfg.region.y_max)?;

    raw.f64("radio.carrier_hz", &mut cfg.radio.carrier_hz)?;
    raw.f64("radio.tx_power_dbm", &mut cfg.radio.tx_power_dbm)?;
    raw.f64("radio.noise_dbm", &mut cfg.radio.noise_dbm)?;
    raw.f64("radio.bandwidth_hz", &mut cfg.radio.bandwidth_hz)?;
    raw.f64("radio.pl_threshold_db", &mut cfg.radio.pl_threshold_db)?;
    raw.f64("radio.backhaul_cap_bps", &mut cfg.radio.backhaul_cap_bps)?;
    raw.f64("radio.backhaul_rtt_budget_ms", &mut cfg.radio.backhaul_rtt_budget_ms)?;

    if let Some(name) = raw.typed::<String>("environment.preset", "a preset name")? {
        let line = raw.scalars["environment.preset"].line;
        cfg.environment = AtgEnvironment::preset(&name).ok_or_else(|| ConfigError::Type {
            key: "environment.preset".into(),
            line,
            message: format!("unknown preset '{name}' (suburban, urban, dense-urban, highrise-urban)"),
        })?;
    }
    let overridden = ["environment.a", "environment.b", "environment.eta_los_db", "environment.eta_nlos_db"]
        .iter()
        .any(|k| raw.scalars.contains_key(*k));
    raw.f64("environment.a", &mut cfg.environment.a)?;
    raw.f64("environment.b", &mut cfg.environment.b)?;
    raw.f64("environment.eta_los_db", &mut cfg.environment.eta_los)?;
    raw.f64("environment.eta_nlos_db", &mut cfg.environment.eta_nlos)?;
    if overridden {
        cfg.environment.name = format!("{} (custom)", cfg.environment.name);
    }

    if let Some(entries) = raw.lists.get("demands.level") {
        cfg.demands = entries
            .iter()
            .map(|e| {
                let v = Raw::tuple(e, "demands.level", 3, "id,min_rate_bps,fraction")?;
                if !(v[0] >= 0.0 && v[0].fract() == 0.0 && v[0] <= f64::from(u32::MAX)) {
                    return Err(ConfigError::Type {
                        key: "demands.level".into(),
                        line: e.line,
                        message: format!("level id must be a nonnegative integer, got {}", v[0]),
                    });
                }
                Ok(DemandLevel { id: v[0] as u32, min_rate: v[1], fraction: v[2] })
            })
            .collect::<ConfigResult<_>>()?;
    }

    raw.usize("crowd.n_ues", &mut cfg.crowd.n_ues)?;
    cfg.crowd.seed = raw.typed::<u64>("crowd.seed", "a nonnegative integer")?;
    raw.f64("crowd.drift_sigma", &mut cfg.crowd.drift_sigma)?;
    if let Some(entries) = raw.lists.get("crowd.hotspot") {
        cfg.crowd.hotspots = entries
            .iter()
            .map(|e| {
                let v = Raw::tuple(e, "crowd.hotspot", 4, "cx,cy,sigma,weight")?;
                Ok(HotSpot::new(Point2::new(v[0], v[1]), v[2], v[3]))
            })
            .collect::<ConfigResult<_>>()?;
    }

    raw.f64("uav.h_min", &mut cfg.uav.search.h_min)?;
    raw.f64("uav.h_max", &mut cfg.uav.search.h_max)?;
    raw.f64("uav.hover_endurance_s", &mut cfg.uav.hover_endurance_s)?;
    raw.f64("uav.epoch_s", &mut cfg.uav.epoch_s)?;
    raw.usize("uav.coarse_grid", &mut cfg.uav.search.coarse_grid)?;
    raw.f64("uav.refine_tol", &mut cfg.uav.search.refine_tol)?;
    if let Some(p) = raw.typed::<Policy>("uav.policy", "on-demand or max-coverage")? {
        cfg.uav.policy = p;
    }

    let l = &mut cfg.learning;
    raw.f64("learning.outlier_z", &mut l.config.outlier_z)?;
    raw.usize("learning.k_bins", &mut l.config.k_bins)?;
    raw.usize("learning.min_samples", &mut l.config.min_samples)?;
    raw.f64("learning.shadowing_sigma", &mut l.config.shadowing_sigma)?;
    raw.usize("learning.n_train", &mut l.n_train)?;
    raw.usize("learning.n_test", &mut l.n_test)?;
    raw.f64("learning.los_offset_db", &mut l.los_offset_db)?;
    raw.f64("learning.nlos_offset_db", &mut l.nlos_offset_db)?;
    raw.f64("learning.h_min", &mut l.geometry.h_min)?;
    raw.f64("learning.h_max", &mut l.geometry.h_max)?;
    raw.f64("learning.r_min", &mut l.geometry.r_min)?;
    raw.f64("learning.r_max", &mut l.geometry.r_max)?;

    let e = &mut cfg.esn;
    raw.usize("esn.reservoir_size", &mut e.config.reservoir_size)?;
    raw.f64("esn.spectral_radius", &mut e.config.spectral_radius)?;
    raw.f64("esn.input_scale", &mut e.config.input_scale)?;
    raw.f64("esn.leak", &mut e.config.leak)?;
    raw.f64("esn.ridge", &mut e.config.ridge)?;
    raw.usize("esn.washout", &mut e.config.washout)?;
    raw.f64("esn.connectivity", &mut e.config.connectivity)?;
    raw.usize("esn.horizon", &mut e.horizon)?;

    if let Some(v) = raw.typed::<String>("sweep.variable", "n_ues or altitude")? {
        cfg.sweep.variable = match v.as_str() {
            "n_ues" => SweepVariable::NUes,
            "altitude" => SweepVariable::Altitude,
            other => {
                return Err(ConfigError::Type {
                    key: "sweep.variable".into(),
                    line: raw.scalars["sweep.variable"].line,
                    message: format!("expected n_ues or altitude, got '{other}'"),
                })
            }
        };
    }
    if let Some(entry) = raw.scalars.get("sweep.values") {
        cfg.sweep.values = entry
            .value
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| ConfigError::Type {
                    key: "sweep.values".into(),
                    line: entry.line,
                    message: format!("expected a comma-separated list of numbers, got '{}'", entry.value),
                })
            })
            .collect::<ConfigResult<_>>()?;
    }
    raw.usize("sweep.repetitions", &mut cfg.sweep.repetitions)?;
    if let Some(entry) = raw.scalars.get("sweep.policies") {
        cfg.sweep.policies = entry
            .value
            .split(',')
            .map(|f| {
                f.trim().parse::<Policy>().map_err(|message| ConfigError::Type {
                    key: "sweep.policies".into(),
                    line: entry.line,
                    message,
                })
            })
            .collect::<ConfigResult<_>>()?;
    }

    cfg.validate()?;
    Ok(cfg)
}

//! Online 3D channel learning from received signal strength.
//!
//! The pipeline runs in five steps over a batch of RSS samples:
//!
//! 1. collect samples ([`generate_samples`] stands in for field measurement),
//! 2. drop outliers per log-distance decile ([`preprocess`]),
//! 3. split LoS from NLoS by clustering excess loss ([`identify_states`]),
//! 4. fit a per-state log-distance line and elevation-binned LoS frequencies
//!    ([`fit_temporary_model`]),
//! 5. predict link quality at a new geometry ([`predict_link_quality`]).
//!
//! [`evaluate`] compares the learned model with a static ATG parameter set on
//! held-out samples.

pub mod kmeans;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::atg_channel::{
    elevation_angle, fspl, fspl_intercept, mean_path_loss, p_los, shannon_rate, snr_db, AtgEnvironment,
    RadioConfig,
};
use crate::geometry::{Point2, Point3};
use crate::mobility_forecast::rmse;
use crate::seeds;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RssSample {
    pub ue_pos: Point2,
    pub uav_pos: Point3,
    pub rss_dbm: f64,
    pub t: f64,
}

impl RssSample {
    pub fn ground_distance(&self) -> f64 {
        self.ue_pos.distance(&self.uav_pos.ground())
    }

    pub fn distance(&self) -> f64 {
        self.uav_pos.z.hypot(self.ground_distance())
    }

    pub fn elevation_deg(&self) -> f64 {
        elevation_angle(self.uav_pos.z, self.ground_distance()).unwrap_or(90.0)
    }

    pub fn path_loss(&self, radio: &RadioConfig) -> f64 {
        radio.tx_power_dbm - self.rss_dbm
    }

    /// Measured loss above free space.
    pub fn excess_loss(&self, radio: &RadioConfig) -> f64 {
        self.path_loss(radio) - fspl(self.distance(), radio.carrier_hz).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelState {
    Los,
    Nlos,
}

/// Ground-truth log-distance lines `A + 10·alpha·log10(d)` per state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthChannel {
    pub a_los: f64,
    pub alpha_los: f64,
    pub a_nlos: f64,
    pub alpha_nlos: f64,
}

impl TruthChannel {
    /// Free-space slope with the environment's excess losses plus offsets.
    /// Zero offsets reproduce `env` exactly.
    pub fn from_environment(env: &AtgEnvironment, carrier_hz: f64, los_offset_db: f64, nlos_offset_db: f64) -> Self {
        let intercept = fspl_intercept(carrier_hz);
        Self {
            a_los: intercept + env.eta_los + los_offset_db,
            alpha_los: 2.0,
            a_nlos: intercept + env.eta_nlos + nlos_offset_db,
            alpha_nlos: 2.0,
        }
    }

    pub fn loss(&self, state: ChannelState, d: f64) -> f64 {
        let x = 10.0 * d.log10();
        match state {
            ChannelState::Los => self.a_los + self.alpha_los * x,
            ChannelState::Nlos => self.a_nlos + self.alpha_nlos * x,
        }
    }
}

/// Where synthetic measurements are taken: UAV altitude and UE ground
/// distance are drawn uniformly from these ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGeometry {
    pub h_min: f64,
    pub h_max: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Time between consecutive samples (s).
    pub dt: f64,
}

impl Default for SampleGeometry {
    fn default() -> Self {
        Self { h_min: 50.0, h_max: 300.0, r_min: 10.0, r_max: 2000.0, dt: 0.1 }
    }
}

impl SampleGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.h_min > 0.0 && self.h_min <= self.h_max && self.r_min >= 0.0 && self.r_min <= self.r_max) {
            return Err(Error::Configuration(format!("invalid sample geometry {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningConfig {
    pub outlier_z: f64,
    pub k_bins: usize,
    pub min_samples: usize,
    /// Shadowing of the synthetic generator (dB).
    pub shadowing_sigma: f64,
}

impl Default for LearningConfig {
    fn default() -> Self {
        Self { outlier_z: 3.0, k_bins: 18, min_samples: 30, shadowing_sigma: 3.0 }
    }
}

impl LearningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.outlier_z > 0.0) {
            return Err(Error::Configuration("learning outlier_z must be > 0".into()));
        }
        if self.k_bins < 3 {
            return Err(Error::Configuration("learning k_bins must be >= 3".into()));
        }
        if self.min_samples < 10 {
            return Err(Error::Configuration("learning min_samples must be >= 10".into()));
        }
        if !(self.shadowing_sigma >= 0.0) {
            return Err(Error::Configuration("learning shadowing must be >= 0".into()));
        }
        Ok(())
    }
}

/// Samples plus the states that produced them (for scoring only).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSamples {
    pub samples: Vec<RssSample>,
    pub truth: Vec<ChannelState>,
}

/// Synthetic RSS measurements. Each sample's state is LoS with probability
/// `p_los(θ, env)`; its loss is the truth line for that state plus zero-mean
/// Gaussian shadowing.
pub fn generate_samples(
    env: &AtgEnvironment,
    radio: &RadioConfig,
    truth: &TruthChannel,
    geometry: &SampleGeometry,
    n: usize,
    shadowing_sigma: f64,
    seed: u64,
) -> Result<GeneratedSamples> {
    geometry.validate()?;
    if !(shadowing_sigma >= 0.0) {
        return Err(Error::Configuration(format!("shadowing must be >= 0, got {shadowing_sigma}")));
    }
    let shadow = Normal::new(0.0, shadowing_sigma).map_err(|e| Error::Configuration(e.to_string()))?;
    let mut rng = seeds::rng(seed);
    let mut samples = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for i in 0..n {
        let h = rng.random_range(geometry.h_min..=geometry.h_max);
        let r = rng.random_range(geometry.r_min..=geometry.r_max);
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let theta = elevation_angle(h, r)?;
        let state = if rng.random::<f64>() < p_los(theta, env) { ChannelState::Los } else { ChannelState::Nlos };
        let noise = if shadowing_sigma > 0.0 { shadow.sample(&mut rng) } else { 0.0 };
        let loss = truth.loss(state, h.hypot(r)) + noise;
        samples.push(RssSample {
            ue_pos: Point2::new(r * phi.cos(), r * phi.sin()),
            uav_pos: Point3::new(0.0, 0.0, h),
            rss_dbm: radio.tx_power_dbm - loss,
            t: i as f64 * geometry.dt,
        });
        states.push(state);
    }
    Ok(GeneratedSamples { samples, truth: states })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub samples: Vec<RssSample>,
    /// Input positions of the surviving samples.
    pub kept: Vec<usize>,
    pub diagnostic: Option<String>,
}

/// Drops samples whose excess loss lies more than `outlier_z` standard
/// deviations from the mean of their log-distance decile. Deciles hold equal
/// sample counts after sorting by distance; order is preserved.
pub fn preprocess(samples: &[RssSample], cfg: &LearningConfig, radio: &RadioConfig) -> Preprocessed {
    if samples.len() < 10 {
        return Preprocessed {
            samples: samples.to_vec(),
            kept: (0..samples.len()).collect(),
            diagnostic: (!samples.is_empty())
                .then(|| format!("only {} samples; outlier removal skipped", samples.len())),
        };
    }
    let excess: Vec<f64> = samples.iter().map(|s| s.excess_loss(radio)).collect();
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| samples[a].distance().total_cmp(&samples[b].distance()).then(a.cmp(&b)));

    let n = samples.len();
    let mut keep = vec![true; n];
    for decile in 0..10 {
        let group = &order[decile * n / 10..(decile + 1) * n / 10];
        let m = group.len() as f64;
        let mean = group.iter().map(|&i| excess[i]).sum::<f64>() / m;
        let sd = (group.iter().map(|&i| (excess[i] - mean).powi(2)).sum::<f64>() / m).sqrt();
        for &i in group {
            if !excess[i].is_finite() || (sd > 0.0 && (excess[i] - mean).abs() > cfg.outlier_z * sd) {
                keep[i] = false;
            }
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    Preprocessed { samples: kept.iter().map(|&i| samples[i]).collect(), kept, diagnostic: None }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateIdentification {
    pub labels: Vec<ChannelState>,
    /// Mean excess loss of the LoS and NLoS clusters.
    pub centroids: [f64; 2],
    /// All excess losses were identical; every sample is labelled LoS.
    pub degenerate: bool,
}

/// Two-means clustering of excess loss; the lower cluster is LoS.
pub fn identify_states(samples: &[RssSample], radio: &RadioConfig) -> Result<StateIdentification> {
    if samples.len() < 2 {
        return Err(Error::Domain(format!("state identification needs >= 2 samples, got {}", samples.len())));
    }
    let excess: Vec<f64> = samples.iter().map(|s| s.excess_loss(radio)).collect();
    let clusters = kmeans::two_means(&excess);
    let labels = clusters
        .high
        .iter()
        .map(|&high| if high { ChannelState::Nlos } else { ChannelState::Los })
        .collect();
    Ok(StateIdentification { labels, centroids: clusters.centroids, degenerate: clusters.degenerate })
}

/// Least-squares line `loss = intercept + slope·10·log10(d)` for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateFit {
    pub intercept_db: f64,
    pub slope: f64,
    pub samples: usize,
    /// False when too few samples (or no distance spread); the line is then 0.
    pub valid: bool,
}

impl StateFit {
    pub fn loss(&self, d: f64) -> f64 {
        self.intercept_db + self.slope * 10.0 * d.log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElevationBin {
    pub lo_deg: f64,
    pub hi_deg: f64,
    pub los_count: usize,
    pub nlos_count: usize,
}

impl ElevationBin {
    pub fn total(&self) -> usize {
        self.los_count + self.nlos_count
    }

    /// `None` for an empty bin.
    pub fn los_frequency(&self) -> Option<f64> {
        (self.total() > 0).then(|| self.los_count as f64 / self.total() as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporaryChannelModel {
    pub los: StateFit,
    pub nlos: StateFit,
    pub bins: Vec<ElevationBin>,
}

impl TemporaryChannelModel {
    pub fn bin_index(&self, theta_deg: f64) -> usize {
        elevation_bin(theta_deg, self.bins.len())
    }
}

/// Index of the equal-width bin over [0°, 90°] holding `theta_deg`; 90° goes
/// to the last bin.
pub fn elevation_bin(theta_deg: f64, k_bins: usize) -> usize {
    ((theta_deg / 90.0 * k_bins as f64).floor().max(0.0) as usize).min(k_bins - 1)
}

fn ols(points: &[(f64, f64)], min_samples: usize) -> StateFit {
    let n = points.len();
    let invalid = StateFit { intercept_db: 0.0, slope: 0.0, samples: n, valid: false };
    if n < min_samples || n < 2 {
        return invalid;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return invalid;
    }
    let slope = sxy / sxx;
    StateFit { intercept_db: my - slope * mx, slope, samples: n, valid: true }
}

/// Per-state regression of path loss on `10·log10(d)` and LoS frequencies over
/// `k_bins` equal-width elevation bins on [0°, 90°].
pub fn fit_temporary_model(
    samples: &[RssSample],
    labels: &[ChannelState],
    cfg: &LearningConfig,
    radio: &RadioConfig,
) -> Result<TemporaryChannelModel> {
    cfg.validate()?;
    if samples.len() != labels.len() {
        return Err(Error::Domain(format!(
            "{} samples but {} labels",
            samples.len(),
            labels.len()
        )));
    }
    let width = 90.0 / cfg.k_bins as f64;
    let mut bins: Vec<ElevationBin> = (0..cfg.k_bins)
        .map(|k| ElevationBin {
            lo_deg: k as f64 * width,
            hi_deg: if k + 1 == cfg.k_bins { 90.0 } else { (k + 1) as f64 * width },
            los_count: 0,
            nlos_count: 0,
        })
        .collect();
    let mut los = Vec::new();
    let mut nlos = Vec::new();
    for (s, &label) in samples.iter().zip(labels) {
        let point = (10.0 * s.distance().log10(), s.path_loss(radio));
        let bin = &mut bins[elevation_bin(s.elevation_deg(), cfg.k_bins)];
        match label {
            ChannelState::Los => {
                los.push(point);
                bin.los_count += 1;
            }
            ChannelState::Nlos => {
                nlos.push(point);
                bin.nlos_count += 1;
            }
        }
    }
    Ok(TemporaryChannelModel { los: ols(&los, cfg.min_samples), nlos: ols(&nlos, cfg.min_samples), bins })
}
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkPrediction {
    pub path_loss_db: f64,
    /// Shannon rate over the full radio bandwidth.
    pub rate_bps: f64,
    pub los_frequency: f64,
    /// The elevation bin was empty and its nearest nonempty neighbour was used.
    pub used_nearest_bin: bool,
    /// Set when one state's fit is invalid and the other stood in for it.
    pub fallback_from: Option<ChannelState>,
}

/// Expected loss `f·PL_LoS(d) + (1 − f)·PL_NLoS(d)` with `f` the learned LoS
/// frequency of the elevation bin.
pub fn predict_link_quality(
    model: &TemporaryChannelModel,
    h: f64,
    r: f64,
    radio: &RadioConfig,
) -> Result<LinkPrediction> {
    let (los, nlos, fallback_from) = match (model.los.valid, model.nlos.valid) {
        (true, true) => (model.los, model.nlos, None),
        (true, false) => (model.los, model.los, Some(ChannelState::Nlos)),
        (false, true) => (model.nlos, model.nlos, Some(ChannelState::Los)),
        (false, false) => return Err(Error::Domain("model has no valid state fit".into())),
    };
    let theta = elevation_angle(h, r)?;
    let k = model.bin_index(theta);
    let nearest = (0..model.bins.len())
        .filter(|&j| model.bins[j].total() > 0)
        .min_by_key(|&j| (j.abs_diff(k), j))
        .ok_or_else(|| Error::Domain("model has no populated elevation bin".into()))?;
    let f = model.bins[nearest].los_frequency().expect("populated bin");
    let d = h.hypot(r);
    let path_loss_db = f * los.loss(d) + (1.0 - f) * nlos.loss(d);
    Ok(LinkPrediction {
        path_loss_db,
        rate_bps: shannon_rate(radio.bandwidth_hz, snr_db(path_loss_db, radio)),
        los_frequency: f,
        used_nearest_bin: nearest != k,
        fallback_from,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub distance_m: f64,
    pub measured_db: f64,
    pub learned_db: f64,
    pub baseline_db: f64,
}

/// Measured, learned and baseline loss for every held-out sample, ordered by
/// distance (stable).
pub fn evaluation_rows(
    model: &TemporaryChannelModel,
    baseline: &AtgEnvironment,
    heldout: &[RssSample],
    radio: &RadioConfig,
) -> Result<Vec<EvalRow>> {
    let mut rows = heldout
        .iter()
        .map(|s| {
            let (h, r) = (s.uav_pos.z, s.ground_distance());
            Ok(EvalRow {
                distance_m: s.distance(),
                measured_db: s.path_loss(radio),
                learned_db: predict_link_quality(model, h, r, radio)?.path_loss_db,
                baseline_db: mean_path_loss(h, r, baseline, radio.carrier_hz)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.distance_m.total_cmp(&b.distance_m));
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub n: usize,
    pub rmse_learned: f64,
    pub rmse_baseline: f64,
}

/// RMSE of predicted against measured path loss for the learned model and for
/// the static baseline environment.
pub fn evaluate(
    model: &TemporaryChannelModel,
    baseline: &AtgEnvironment,
    heldout: &[RssSample],
    radio: &RadioConfig,
) -> Result<Evaluation> {
    if heldout.is_empty() {
        return Err(Error::Domain("evaluation needs held-out samples".into()));
    }
    let rows = evaluation_rows(model, baseline, heldout, radio)?;
    let measured: Vec<f64> = rows.iter().map(|r| r.measured_db).collect();
    let learned: Vec<f64> = rows.iter().map(|r| r.learned_db).collect();
    let base: Vec<f64> = rows.iter().map(|r| r.baseline_db).collect();
    Ok(Evaluation {
        n: rows.len(),
        rmse_learned: rmse(&measured, &learned)?.value,
        rmse_baseline: rmse(&measured, &base)?.value,
    })
}

/// Output of [`learn`]: the model plus what each step did.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnedChannel {
    pub model: TemporaryChannelModel,
    pub kept: usize,
    pub dropped: usize,
    pub states: StateIdentification,
}

/// Steps 2–4 on a batch of raw samples.
pub fn learn(samples: &[RssSample], cfg: &LearningConfig, radio: &RadioConfig) -> Result<LearnedChannel> {
    let clean = preprocess(samples, cfg, radio);
    let states = identify_states(&clean.samples, radio)?;
    let model = fit_temporary_model(&clean.samples, &states.labels, cfg, radio)?;
    Ok(LearnedChannel {
        model,
        kept: clean.samples.len(),
        dropped: samples.len() - clean.samples.len(),
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radio() -> RadioConfig {
        RadioConfig::default()
    }

    #[test]
    fn noiseless_forced_los() {
        // a = 0 makes the sigmoid identically 1.
        let env = AtgEnvironment::new("los", 0.0, 0.5, 1.0, 20.0).unwrap();
        let truth = TruthChannel { a_los: 35.0, alpha_los: 2.2, a_nlos: 60.0, alpha_nlos: 3.0 };
        let gen = generate_samples(&env, &radio(), &truth, &SampleGeometry::default(), 200, 0.0, 1).unwrap();
        for (s, st) in gen.samples.iter().zip(&gen.truth) {
            assert_eq!(*st, ChannelState::Los);
            let expect = radio().tx_power_dbm - 35.0 - 10.0 * 2.2 * s.distance().log10();
            assert!((s.rss_dbm - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_samples() {
        let truth = TruthChannel::from_environment(&AtgEnvironment::urban(), 2e9, 0.0, 0.0);
        let gen =
            generate_samples(&AtgEnvironment::urban(), &radio(), &truth, &SampleGeometry::default(), 0, 1.0, 1).unwrap();
        assert!(gen.samples.is_empty());
        let cfg = LearningConfig::default();
        let out = preprocess(&[], &cfg, &radio());
        assert!(out.samples.is_empty());
    }

    #[test]
    fn truth_from_environment_matches_mean_model_pieces() {
        let env = AtgEnvironment::urban();
        let truth = TruthChannel::from_environment(&env, 2e9, 0.0, 0.0);
        let d = 731.0;
        let fs = fspl(d, 2e9).unwrap();
        assert!((truth.loss(ChannelState::Los, d) - (fs + env.eta_los)).abs() < 1e-9);
        assert!((truth.loss(ChannelState::Nlos, d) - (fs + env.eta_nlos)).abs() < 1e-9);
    }

    fn sample_with_excess(excess: f64, d: f64) -> RssSample {
        let pl = fspl(d, 2e9).unwrap() + excess;
        RssSample {
            ue_pos: Point2::new(d, 0.0),
            uav_pos: Point3::new(0.0, 0.0, 1e-9),
            rss_dbm: radio().tx_power_dbm - pl,
            t: 0.0,
        }
    }

    #[test]
    fn identify_twin_clusters() {
        let samples: Vec<RssSample> =
            [1.0, 1.0, 20.0, 20.0].iter().map(|&e| sample_with_excess(e, 500.0)).collect();
        let ids = identify_states(&samples, &radio()).unwrap();
        assert_eq!(ids.labels, vec![ChannelState::Los, ChannelState::Los, ChannelState::Nlos, ChannelState::Nlos]);
    }

    #[test]
    fn identify_needs_two_samples() {
        assert!(identify_states(&[sample_with_excess(1.0, 10.0)], &radio()).is_err());
    }

    #[test]
    fn identical_excess_is_degenerate() {
        let samples: Vec<RssSample> = (0..5).map(|i| sample_with_excess(4.0, 100.0 + i as f64)).collect();
        let ids = identify_states(&samples, &radio()).unwrap();
        assert!(ids.degenerate);
        assert!(ids.labels.iter().all(|&l| l == ChannelState::Los));
    }

    #[test]
    fn short_input_skips_outlier_removal() {
        let samples: Vec<RssSample> = (0..5).map(|i| sample_with_excess(i as f64 * 100.0, 100.0)).collect();
        let out = preprocess(&samples, &LearningConfig::default(), &radio());
        assert_eq!(out.samples, samples);
        assert!(out.diagnostic.is_some());
    }

    #[test]
    fn prediction_mixture_midpoint() {
        let model = TemporaryChannelModel {
            // loss(d) = 100 and 120 at any d: zero slope.
            los: StateFit { intercept_db: 100.0, slope: 0.0, samples: 50, valid: true },
            nlos: StateFit { intercept_db: 120.0, slope: 0.0, samples: 50, valid: true },
            bins: vec![ElevationBin { lo_deg: 0.0, hi_deg: 30.0, los_count: 5, nlos_count: 5 },
                       ElevationBin { lo_deg: 30.0, hi_deg: 60.0, los_count: 7, nlos_count: 0 },
                       ElevationBin { lo_deg: 60.0, hi_deg: 90.0, los_count: 0, nlos_count: 0 }],
        };
        let p = predict_link_quality(&model, 100.0, 1000.0, &radio()).unwrap();
        assert!((p.path_loss_db - 110.0).abs() < 1e-12);
        assert!(!p.used_nearest_bin);

        let full = predict_link_quality(&model, 100.0, 100.0, &radio()).unwrap();
        assert!((full.path_loss_db - 100.0).abs() < 1e-12);

        // 80° falls in the empty top bin; its neighbour is all-LoS.
        let steep = predict_link_quality(&model, 100.0, 17.0, &radio()).unwrap();
        assert!(steep.used_nearest_bin);
        assert!((steep.path_loss_db - 100.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_state_falls_back() {
        let model = TemporaryChannelModel {
            los: StateFit { intercept_db: 90.0, slope: 0.0, samples: 50, valid: true },
            nlos: StateFit { intercept_db: 0.0, slope: 0.0, samples: 3, valid: false },
            bins: vec![ElevationBin { lo_deg: 0.0, hi_deg: 90.0, los_count: 1, nlos_count: 1 }],
        };
        let p = predict_link_quality(&model, 50.0, 50.0, &radio()).unwrap();
        assert_eq!(p.fallback_from, Some(ChannelState::Nlos));
        assert!((p.path_loss_db - 90.0).abs() < 1e-12);
    }

    #[test]
    fn baseline_rmse_zero_on_own_mean() {
        // Held-out measurements equal to the baseline mean loss.
        let env = AtgEnvironment::urban();
        let held: Vec<RssSample> = (1..50)
            .map(|i| {
                let (h, r) = (100.0, 20.0 * i as f64);
                let pl = mean_path_loss(h, r, &env, 2e9).unwrap();
                RssSample {
                    ue_pos: Point2::new(r, 0.0),
                    uav_pos: Point3::new(0.0, 0.0, h),
                    rss_dbm: radio().tx_power_dbm - pl,
                    t: 0.0,
                }
            })
            .collect();
        let model = TemporaryChannelModel {
            los: StateFit { intercept_db: 40.0, slope: 2.0, samples: 50, valid: true },
            nlos: StateFit { intercept_db: 60.0, slope: 2.0, samples: 50, valid: true },
            bins: vec![ElevationBin { lo_deg: 0.0, hi_deg: 90.0, los_count: 1, nlos_count: 1 }],
        };
        let ev = evaluate(&model, &env, &held, &radio()).unwrap();
        assert!(ev.rmse_baseline < 1e-9);
        assert!(evaluate(&model, &env, &[], &radio()).is_err());
    }
}

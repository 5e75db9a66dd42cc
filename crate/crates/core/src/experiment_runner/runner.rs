//! Scenario orchestration: missions, sweeps, channel learning and forecasts.
//!
//! Sub-seeds are `derive_seed(seed, tag, parts)`, i.e. the seed plus the
//! FNV-1a hash of the tag and the parts, so any single cell can be replayed:
//!
//! | stream                     | seed                                              |
//! |----------------------------|---------------------------------------------------|
//! | density sweep crowd        | `derive_seed(run.seed, "density", [n, rep])`       |
//! | demand levels of a crowd   | `derive_seed(crowd_seed, "demands", [])`           |
//! | mission hotspot drift      | `derive_seed(run.seed, "drift", [epoch])`          |
//! | channel training samples   | `derive_seed(run.seed, "learn-train", [])`         |
//! | channel held-out samples   | `derive_seed(run.seed, "learn-test", [])`          |
//! | reservoir                  | `derive_seed(run.seed, "esn", [])`                 |
//! | synthetic trajectories     | `derive_seed(run.seed, "traj-train"/"traj-test", [k])` |

use rayon::prelude::*;
use serde::Serialize;

use crate::altitude_optimizer::{coverage_profile, optimal_altitude, OptimalAltitude};
use crate::atg_channel::{mean_path_loss, snr_db, spectral_efficiency};
use crate::channel_learning::{
    evaluate, evaluation_rows, generate_samples, learn, EvalRow, Evaluation, LearnedChannel, TruthChannel,
};
use crate::experiment_runner::config::{RunConfig, SweepVariable};
use crate::geometry::Point2;
use crate::mobility_forecast::esn::{build_reservoir, persistence, predict, train_readout};
use crate::mobility_forecast::synthetic::{synthetic_trajectory, SyntheticConfig};
use crate::mobility_forecast::{rmse_points, Trajectory};
use crate::placement::{place, PlacementResult, Policy};
use crate::scenario::{assign_demands, evolve_hotspots, generate_crowd, DemandLevel, HotSpot, Ue};
use crate::seeds::derive_seed;
use crate::{Error, Result};

/// A crowd with demand levels assigned.
pub fn scenario_ues(cfg: &RunConfig, hotspots: &[HotSpot], n: usize, crowd_seed: u64) -> Result<Vec<Ue>> {
    let ues = generate_crowd(&cfg.region, hotspots, n, crowd_seed)?;
    assign_demands(&ues, &cfg.demands, derive_seed(crowd_seed, "demands", &[]))
}

pub fn density_seed(seed: u64, n: usize, repetition: usize) -> u64 {
    derive_seed(seed, "density", &[n as u64, repetition as u64])
}

/// Per demand level outcome of one placement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStats {
    pub level_id: u32,
    pub served: usize,
    /// Smallest rate granted to a served user of this level.
    pub min_allocated_rate_bps: Option<f64>,
    pub violations: usize,
}

pub fn level_stats(result: &PlacementResult, ues: &[Ue], levels: &[DemandLevel]) -> Vec<LevelStats> {
    levels
        .iter()
        .map(|level| {
            let rates: Vec<f64> = ues
                .iter()
                .filter(|u| u.demand == level.id)
                .filter_map(|u| result.allocation.grants.get(&u.id))
                .map(|g| g.rate_bps)
                .collect();
            LevelStats {
                level_id: level.id,
                served: rates.len(),
                min_allocated_rate_bps: rates.iter().copied().reduce(f64::min),
                violations: rates.iter().filter(|&&r| r < level.min_rate).count(),
            }
        })
        .collect()
}

/// Number of epochs that fit in the hover endurance; a trailing partial epoch
/// counts.
pub fn epoch_count(endurance_s: f64, epoch_s: f64) -> usize {
    ((endurance_s / epoch_s) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissionEpoch {
    pub epoch: usize,
    pub t_start_s: f64,
    pub duration_s: f64,
    pub n_ues: usize,
    pub served: usize,
    pub center_x_m: f64,
    pub center_y_m: f64,
    pub altitude_m: f64,
    pub radius_m: f64,
    pub backhaul_bps: f64,
    pub backhaul_utilization: f64,
    pub levels: Vec<LevelStats>,
    pub hotspots: Vec<HotSpot>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissionReport {
    pub policy: Policy,
    pub epochs: Vec<MissionEpoch>,
}

/// Flies the configured mission: per epoch the hotspots drift, the crowd is
/// redrawn from the crowd seed and the UAV is re-placed.
pub fn run_mission(cfg: &RunConfig) -> Result<MissionReport> {
    let n_epochs = epoch_count(cfg.uav.hover_endurance_s, cfg.uav.epoch_s);
    let mut hotspots = cfg.crowd.hotspots.clone();
    let mut epochs = Vec::with_capacity(n_epochs);
    for epoch in 0..n_epochs {
        let t_start_s = epoch as f64 * cfg.uav.epoch_s;
        let duration_s = cfg.uav.epoch_s.min(cfg.uav.hover_endurance_s - t_start_s);
        hotspots = evolve_hotspots(
            &hotspots,
            &cfg.region,
            duration_s,
            cfg.crowd.drift_sigma,
            derive_seed(cfg.seed, "drift", &[epoch as u64]),
        )?;
        let ues = scenario_ues(cfg, &hotspots, cfg.crowd.n_ues, cfg.crowd_seed())?;
        let result = place(cfg.uav.policy, &ues, &cfg.demands, &cfg.environment, &cfg.radio, &cfg.uav.search)?;
        let backhaul_bps = result.allocation.total_rate();
        epochs.push(MissionEpoch {
            epoch,
            t_start_s,
            duration_s,
            n_ues: ues.len(),
            served: result.served.len(),
            center_x_m: result.center.x,
            center_y_m: result.center.y,
            altitude_m: result.altitude,
            radius_m: result.radius,
            backhaul_bps,
            backhaul_utilization: backhaul_bps / cfg.radio.backhaul_cap_bps,
            levels: level_stats(&result, &ues, &cfg.demands),
            hotspots: hotspots.clone(),
        });
    }
    Ok(MissionReport { policy: cfg.uav.policy, epochs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    pub n_ues: usize,
    pub policy: Policy,
    pub repetition: usize,
    pub level_id: u32,
    pub min_allocated_rate_bps: Option<f64>,
    /// Served users of this level.
    pub served: usize,
    /// Served users of this level below its floor.
    pub violations: usize,
    /// Σ granted rate over all served users.
    pub backhaul_bps: f64,
}

/// User counts of the sweep; errors if the sweep is over altitude.
pub fn sweep_counts(cfg: &RunConfig) -> Result<Vec<usize>> {
    if cfg.sweep.variable != SweepVariable::NUes {
        return Err(Error::Configuration("sweep.variable must be n_ues for a density sweep".into()));
    }
    Ok(cfg.sweep.values.iter().map(|&v| v as usize).collect())
}

/// One placement per (n, policy, repetition), in parallel. Both policies see
/// the same crowd for a given (n, repetition). Rows are sorted by
/// (n, policy, repetition, level).
pub fn density_sweep(cfg: &RunConfig) -> Result<Vec<DensityRow>> {
    let counts = sweep_counts(cfg)?;
    let mut cells = Vec::new();
    for &n in &counts {
        for &policy in &cfg.sweep.policies {
            for rep in 0..cfg.sweep.repetitions {
                cells.push((n, policy, rep));
            }
        }
    }
    let nested: Vec<Vec<DensityRow>> = cells
        .par_iter()
        .map(|&(n, policy, rep)| -> Result<Vec<DensityRow>> {
            let ues = scenario_ues(cfg, &cfg.crowd.hotspots, n, density_seed(cfg.seed, n, rep))?;
            let result = place(policy, &ues, &cfg.demands, &cfg.environment, &cfg.radio, &cfg.uav.search)?;
            let backhaul_bps = result.allocation.total_rate();
            Ok(level_stats(&result, &ues, &cfg.demands)
                .into_iter()
                .map(|s| DensityRow {
                    n_ues: n,
                    policy,
                    repetition: rep,
                    level_id: s.level_id,
                    min_allocated_rate_bps: s.min_allocated_rate_bps,
                    served: s.served,
                    violations: s.violations,
                    backhaul_bps,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<DensityRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (a.n_ues, a.policy, a.repetition, a.level_id).cmp(&(b.n_ues, b.policy, b.repetition, b.level_id))
    });
    Ok(rows)
}

/// Served-user count above which an equal split cannot meet the lowest
/// demand floor for anybody.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContentionThreshold {
    pub altitude_m: f64,
    /// Spectral efficiency directly below the UAV, the best any user gets.
    pub max_efficiency: f64,
    pub lowest_floor_bps: f64,
    /// Smallest served count `n` with `W/n · max_efficiency < lowest floor`.
    pub served_threshold: usize,
}

/// Computed from the configuration alone, before any run.
pub fn contention_threshold(cfg: &RunConfig) -> Result<ContentionThreshold> {
    let stage1 = optimal_altitude(&cfg.environment, &cfg.radio, &cfg.uav.search)?;
    let pl = mean_path_loss(stage1.altitude, 0.0, &cfg.environment, cfg.radio.carrier_hz)?;
    let max_efficiency = spectral_efficiency(snr_db(pl, &cfg.radio));
    let lowest_floor_bps = cfg.demands.iter().map(|l| l.min_rate).fold(f64::INFINITY, f64::min);
    let capacity = cfg.radio.bandwidth_hz * max_efficiency / lowest_floor_bps;
    let mut served_threshold = capacity.floor() as usize + 1;
    // Guard the strict inequality against rounding at the boundary.
    while cfg.radio.bandwidth_hz / served_threshold as f64 * max_efficiency >= lowest_floor_bps {
        served_threshold += 1;
    }
    Ok(ContentionThreshold { altitude_m: stage1.altitude, max_efficiency, lowest_floor_bps, served_threshold })
}

/// The altitudes of the altitude sweep: the configured values if the sweep is
/// over altitude, otherwise the coarse search grid.
pub fn altitude_values(cfg: &RunConfig) -> Vec<f64> {
    match cfg.sweep.variable {
        SweepVariable::Altitude => cfg.sweep.values.clone(),
        SweepVariable::NUes => cfg.uav.search.grid(),
    }
}

/// `(h, coverage radius)` for each altitude, in input order.
pub fn altitude_sweep(cfg: &RunConfig, h_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if h_values.is_empty() {
        return Err(Error::Configuration("altitude sweep needs at least one altitude".into()));
    }
    coverage_profile(&cfg.environment, &cfg.radio, h_values)
}

pub fn stage1(cfg: &RunConfig) -> Result<OptimalAltitude> {
    optimal_altitude(&cfg.environment, &cfg.radio, &cfg.uav.search)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRun {
    pub truth: TruthChannel,
    pub learned: LearnedChannel,
    pub evaluation: Evaluation,
    pub rows: Vec<EvalRow>,
}

/// Generates training and held-out measurements from the offset truth, learns
/// a model and scores it against the configured environment.
pub fn learn_channel(cfg: &RunConfig) -> Result<ChannelRun> {
    let l = &cfg.learning;
    let truth =
        TruthChannel::from_environment(&cfg.environment, cfg.radio.carrier_hz, l.los_offset_db, l.nlos_offset_db);
    let draw = |n: usize, tag: &str| {
        generate_samples(
            &cfg.environment,
            &cfg.radio,
            &truth,
            &l.geometry,
            n,
            l.config.shadowing_sigma,
            derive_seed(cfg.seed, tag, &[]),
        )
    };
    let train = draw(l.n_train, "learn-train")?;
    let test = draw(l.n_test, "learn-test")?;
    let learned = learn(&train.samples, &l.config, &cfg.radio)?;
    let evaluation = evaluate(&learned.model, &cfg.environment, &test.samples, &cfg.radio)?;
    let rows = evaluation_rows(&learned.model, &cfg.environment, &test.samples, &cfg.radio)?;
    Ok(ChannelRun { truth, learned, evaluation, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForecastRow {
    pub traj_id: usize,
    pub step: usize,
    pub true_x: f64,
    pub true_y: f64,
    pub pred_x: f64,
    pub pred_y: f64,
    pub persistence_x: f64,
    pub persistence_y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRun {
    pub rows: Vec<ForecastRow>,
    pub rmse: f64,
    pub persistence_rmse: f64,
    pub reservoir_seed: u64,
    pub reservoir_redraws: u64,
}

/// Synthetic train and test sets for runs without trajectory files.
pub fn synthetic_sets(cfg: &RunConfig, n_train: usize, n_test: usize) -> (Vec<Trajectory>, Vec<Trajectory>) {
    let syn = SyntheticConfig::default();
    let make = |tag: &str, k: usize| synthetic_trajectory(&cfg.region, &syn, derive_seed(cfg.seed, tag, &[k as u64]));
    (
        (0..n_train).map(|k| make("traj-train", k)).collect(),
        (0..n_test).map(|k| make("traj-test", k)).collect(),
    )
}

/// Trains on `train`, then for every test trajectory forecasts its last
/// `horizon` points from everything before them.
pub fn forecast(cfg: &RunConfig, train: &[Trajectory], test: &[Trajectory]) -> Result<ForecastRun> {
    let horizon = cfg.esn.horizon;
    let model = build_reservoir(&cfg.esn.config, derive_seed(cfg.seed, "esn", &[]))?;
    let model = train_readout(&model, train)?;
    let need = cfg.esn.config.washout.max(2) + horizon;
    let mut rows = Vec::new();
    let (mut truth, mut pred, mut still) = (Vec::new(), Vec::new(), Vec::new());
    for (traj_id, traj) in test.iter().enumerate() {
        if traj.len() < need {
            return Err(Error::Validation {
                line: 0,
                message: format!("test trajectory {traj_id} has {} points; needs {need}", traj.len()),
            });
        }
        let split = traj.len() - horizon;
        let history = Trajectory { points: traj.points[..split].to_vec() };
        let forecast = predict(&model, &history, horizon)?;
        let baseline = persistence(&history, horizon);
        for (step, ((actual, p), b)) in traj.points[split..].iter().zip(&forecast).zip(&baseline).enumerate() {
            rows.push(ForecastRow {
                traj_id,
                step: step + 1,
                true_x: actual.x,
                true_y: actual.y,
                pred_x: p.x,
                pred_y: p.y,
                persistence_x: b.x,
                persistence_y: b.y,
            });
            truth.push(Point2::new(actual.x, actual.y));
            pred.push(*p);
            still.push(*b);
        }
    }
    if truth.is_empty() {
        return Err(Error::Domain("forecast needs at least one test trajectory and horizon > 0".into()));
    }
    Ok(ForecastRun {
        rows,
        rmse: rmse_points(&truth, &pred)?.value,
        persistence_rmse: rmse_points(&truth, &still)?.value,
        reservoir_seed: model.seed,
        reservoir_redraws: model.redraws,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment_runner::config::parse_config;

    #[test]
    fn epoch_counts() {
        assert_eq!(epoch_count(60.0, 60.0), 1);
        assert_eq!(epoch_count(600.0, 60.0), 10);
        assert_eq!(epoch_count(90.0, 60.0), 2);
        assert_eq!(epoch_count(30.0, 60.0), 1);
    }

    #[test]
    fn single_epoch_mission() {
        let cfg = parse_config("uav.hover_endurance_s = 60\ncrowd.n_ues = 40").unwrap();
        assert_eq!(run_mission(&cfg).unwrap().epochs.len(), 1);
    }

    #[test]
    fn still_crowd_same_placement() {
        let cfg = parse_config("uav.hover_endurance_s = 180\ncrowd.n_ues = 60\ncrowd.drift_sigma = 0").unwrap();
        let report = run_mission(&cfg).unwrap();
        assert_eq!(report.epochs.len(), 3);
        let first = &report.epochs[0];
        for e in &report.epochs[1..] {
            assert_eq!((e.center_x_m, e.center_y_m, e.altitude_m, e.served), (first.center_x_m, first.center_y_m, first.altitude_m, first.served));
        }
    }

    #[test]
    fn density_row_count_and_order() {
        let cfg = parse_config("sweep.values = 20,40\nsweep.repetitions = 2").unwrap();
        let rows = density_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2 * cfg.demands.len());
        let keys: Vec<_> = rows.iter().map(|r| (r.n_ues, r.policy, r.repetition, r.level_id)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn altitude_sweep_delegates() {
        let cfg = RunConfig::default();
        let hs = [300.0, 100.0, 700.0];
        let rows = altitude_sweep(&cfg, &hs).unwrap();
        assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), hs.to_vec());
        for (h, r) in rows {
            assert_eq!(r, crate::atg_channel::coverage_radius(h, &cfg.environment, &cfg.radio));
        }
        assert_eq!(altitude_sweep(&cfg, &[250.0]).unwrap().len(), 1);
        assert!(altitude_sweep(&cfg, &[]).is_err());
    }

    #[test]
    fn threshold_is_tight() {
        let cfg = RunConfig::default();
        let t = contention_threshold(&cfg).unwrap();
        let per_user = |n: usize| cfg.radio.bandwidth_hz / n as f64 * t.max_efficiency;
        assert!(per_user(t.served_threshold) < t.lowest_floor_bps);
        assert!(per_user(t.served_threshold - 1) >= t.lowest_floor_bps);
    }
}

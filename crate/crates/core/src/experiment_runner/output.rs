//! CSV and JSON artefacts of each subcommand.
//!
//! Floats are written in Rust's shortest round-trip form, JSON keys in struct
//! declaration order, so identical runs give identical bytes.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::channel_learning::TemporaryChannelModel;
use crate::experiment_runner::config::RunConfig;
use crate::experiment_runner::runner::{
    altitude_sweep, altitude_values, contention_threshold, density_sweep, forecast, learn_channel, run_mission,
    scenario_ues, stage1, synthetic_sets, ContentionThreshold,
};
use crate::mobility_forecast::{parse_trajectory_file, Trajectory};
use crate::placement::{place, PlacementResult, Policy};
use crate::{Error, Result};

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Serialize)]
struct AltitudeSummary<'a> {
    optimal_altitude_m: f64,
    max_radius_m: f64,
    config: &'a RunConfig,
}

/// `altitude_profile.csv` (`h_m,radius_m`) and `altitude_profile.json`.
pub fn cmd_altitude_profile(cfg: &RunConfig, out: &Path) -> Result<()> {
    let rows = altitude_sweep(cfg, &altitude_values(cfg))?;
    write_csv(&out.join("altitude_profile.csv"), &["h_m", "radius_m"], rows.iter().map(|&(h, r)| vec![num(h), num(r)]))?;
    let best = stage1(cfg)?;
    write_json(
        &out.join("altitude_profile.json"),
        &AltitudeSummary { optimal_altitude_m: best.altitude, max_radius_m: best.max_radius, config: cfg },
    )
}

#[derive(Serialize)]
struct PlacementFile<'a> {
    placement: &'a PlacementResult,
    n_ues: usize,
    violations: Vec<u32>,
    config: &'a RunConfig,
}

/// `placement.json` and `placement.csv` (one row per user).
pub fn cmd_place(cfg: &RunConfig, policy: Policy, out: &Path) -> Result<()> {
    let ues = scenario_ues(cfg, &cfg.crowd.hotspots, cfg.crowd.n_ues, cfg.crowd_seed())?;
    let result = place(policy, &ues, &cfg.demands, &cfg.environment, &cfg.radio, &cfg.uav.search)?;
    let violations = result.violations(&ues, &cfg.demands)?;
    write_csv(
        &out.join("placement.csv"),
        &["ue_id", "x_m", "y_m", "level_id", "served", "bandwidth_hz", "rate_bps"],
        ues.iter().map(|u| {
            let grant = result.allocation.grants.get(&u.id);
            vec![
                u.id.to_string(),
                num(u.position.x),
                num(u.position.y),
                u.demand.to_string(),
                u8::from(grant.is_some()).to_string(),
                opt(grant.map(|g| g.bandwidth_hz)),
                opt(grant.map(|g| g.rate_bps)),
            ]
        }),
    )?;
    write_json(
        &out.join("placement.json"),
        &PlacementFile { placement: &result, n_ues: ues.len(), violations, config: cfg },
    )
}

#[derive(Serialize)]
struct DensitySummary<'a> {
    rows: usize,
    contention: ContentionThreshold,
    config: &'a RunConfig,
}

/// `density_sweep.csv` and `density_sweep.json`.
pub fn cmd_density_sweep(cfg: &RunConfig, out: &Path) -> Result<()> {
    let contention = contention_threshold(cfg)?;
    let rows = density_sweep(cfg)?;
    write_csv(
        &out.join("density_sweep.csv"),
        &["n_ues", "policy", "repetition", "level_id", "min_allocated_rate_bps", "served", "violations", "backhaul_bps"],
        rows.iter().map(|r| {
            vec![
                r.n_ues.to_string(),
                r.policy.to_string(),
                r.repetition.to_string(),
                r.level_id.to_string(),
                opt(r.min_allocated_rate_bps),
                r.served.to_string(),
                r.violations.to_string(),
                num(r.backhaul_bps),
            ]
        }),
    )?;
    write_json(&out.join("density_sweep.json"), &DensitySummary { rows: rows.len(), contention, config: cfg })
}

#[derive(Serialize)]
struct ChannelFile<'a> {
    model: &'a TemporaryChannelModel,
    truth: crate::channel_learning::TruthChannel,
    samples_kept: usize,
    samples_dropped: usize,
    centroids_db: [f64; 2],
    degenerate: bool,
    n_heldout: usize,
    rmse_learned_db: f64,
    rmse_baseline_db: f64,
    config: &'a RunConfig,
}

/// `channel_model.json` and `channel_eval.csv`.
pub fn cmd_learn_channel(cfg: &RunConfig, out: &Path) -> Result<()> {
    let run = learn_channel(cfg)?;
    write_csv(
        &out.join("channel_eval.csv"),
        &["distance_m", "measured_db", "learned_db", "baseline_db"],
        run.rows.iter().map(|r| vec![num(r.distance_m), num(r.measured_db), num(r.learned_db), num(r.baseline_db)]),
    )?;
    write_json(
        &out.join("channel_model.json"),
        &ChannelFile {
            model: &run.learned.model,
            truth: run.truth,
            samples_kept: run.learned.kept,
            samples_dropped: run.learned.dropped,
            centroids_db: run.learned.states.centroids,
            degenerate: run.learned.states.degenerate,
            n_heldout: run.evaluation.n,
            rmse_learned_db: run.evaluation.rmse_learned,
            rmse_baseline_db: run.evaluation.rmse_baseline,
            config: cfg,
        },
    )
}

#[derive(Serialize)]
struct ForecastSummary<'a> {
    train_trajectories: usize,
    test_trajectories: usize,
    synthetic: bool,
    horizon: usize,
    rmse_m: f64,
    persistence_rmse_m: f64,
    reservoir_seed: u64,
    reservoir_redraws: u64,
    config: &'a RunConfig,
}

pub fn read_trajectories(path: &Path) -> Result<Vec<Trajectory>> {
    let file = fs::File::open(path)?;
    parse_trajectory_file(std::io::BufReader::new(file))
}

/// `forecast.csv` and `forecast_summary.json`. Without trajectory files a
/// synthetic train/test set is generated from the run seed.
pub fn cmd_forecast(cfg: &RunConfig, train: Option<&Path>, test: Option<&Path>, out: &Path) -> Result<()> {
    let (train_set, test_set, synthetic) = match (train, test) {
        (Some(a), Some(b)) => (read_trajectories(a)?, read_trajectories(b)?, false),
        (None, None) => {
            let (a, b) = synthetic_sets(cfg, 8, 4);
            (a, b, true)
        }
        _ => return Err(Error::Configuration("--train and --test must be given together".into())),
    };
    let run = forecast(cfg, &train_set, &test_set)?;
    write_csv(
        &out.join("forecast.csv"),
        &["traj_id", "step", "true_x", "true_y", "pred_x", "pred_y"],
        run.rows.iter().map(|r| {
            vec![r.traj_id.to_string(), r.step.to_string(), num(r.true_x), num(r.true_y), num(r.pred_x), num(r.pred_y)]
        }),
    )?;
    write_json(
        &out.join("forecast_summary.json"),
        &ForecastSummary {
            train_trajectories: train_set.len(),
            test_trajectories: test_set.len(),
            synthetic,
            horizon: cfg.esn.horizon,
            rmse_m: run.rmse,
            persistence_rmse_m: run.persistence_rmse,
            reservoir_seed: run.reservoir_seed,
            reservoir_redraws: run.reservoir_redraws,
            config: cfg,
        },
    )
}

#[derive(Serialize)]
struct MissionFile<'a> {
    report: &'a crate::experiment_runner::runner::MissionReport,
    config: &'a RunConfig,
}

/// `mission.csv` (one row per epoch) and `mission.json`.
pub fn cmd_mission(cfg: &RunConfig, out: &Path) -> Result<()> {
    let report = run_mission(cfg)?;
    let mut header: Vec<String> = [
        "epoch",
        "t_start_s",
        "duration_s",
        "n_ues",
        "served",
        "center_x_m",
        "center_y_m",
        "altitude_m",
        "radius_m",
        "backhaul_bps",
        "backhaul_utilization",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for level in &cfg.demands {
        header.push(format!("min_rate_level_{}_bps", level.id));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(
        &out.join("mission.csv"),
        &header_refs,
        report.epochs.iter().map(|e| {
            let mut row = vec![
                e.epoch.to_string(),
                num(e.t_start_s),
                num(e.duration_s),
                e.n_ues.to_string(),
                e.served.to_string(),
                num(e.center_x_m),
                num(e.center_y_m),
                num(e.altitude_m),
                num(e.radius_m),
                num(e.backhaul_bps),
                num(e.backhaul_utilization),
            ];
            row.extend(e.levels.iter().map(|l| opt(l.min_allocated_rate_bps)));
            row
        }),
    )?;
    write_json(&out.join("mission.json"), &MissionFile { report: &report, config: cfg })
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use uavbs::experiment_runner::output;
use uavbs::experiment_runner::{parse_config, RunConfig};
use uavbs::placement::Policy;
use uavbs::Error;

/// UAV aerial base station planning simulator.
#[derive(Parser)]
#[command(name = "uavbs", version)]
struct Cli {
    /// Run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `run.seed` (and any `crowd.seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coverage radius against altitude.
    AltitudeProfile,
    /// Place the UAV over one crowd.
    Place {
        /// Overrides `uav.policy`.
        #[arg(long)]
        policy: Option<Policy>,
    },
    /// Placement over the configured user-count sweep, both policies.
    DensitySweep,
    /// Learn a channel model from synthetic RSS samples.
    LearnChannel,
    /// Trajectory forecasting; synthetic trajectories when no files are given.
    Forecast {
        #[arg(long)]
        train: Option<PathBuf>,
        #[arg(long)]
        test: Option<PathBuf>,
    },
    /// Epoch-by-epoch placement over the hover endurance.
    Mission,
}

fn load(cli: &Cli) -> Result<RunConfig, Error> {
    let cfg = match &cli.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    Ok(match cli.seed {
        Some(seed) => cfg.with_seed(seed),
        None => cfg,
    })
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = load(cli)?;
    let out: &Path = &cli.out;
    std::fs::create_dir_all(out)?;
    match &cli.command {
        Command::AltitudeProfile => output::cmd_altitude_profile(&cfg, out),
        Command::Place { policy } => output::cmd_place(&cfg, policy.unwrap_or(cfg.uav.policy), out),
        Command::DensitySweep => output::cmd_density_sweep(&cfg, out),
        Command::LearnChannel => output::cmd_learn_channel(&cfg, out),
        Command::Forecast { train, test } => output::cmd_forecast(&cfg, train.as_deref(), test.as_deref(), out),
        Command::Mission => output::cmd_mission(&cfg, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}

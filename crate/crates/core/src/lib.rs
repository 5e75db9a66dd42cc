//! Planning simulator for a single UAV aerial base station (UAV-BS).
//!
//! The crate is organised around the planning pipeline:
//!
//! - [`scenario`]: synthetic flash crowds, demand levels and density maps.
//! - [`atg_channel`]: air-to-ground path loss, LoS probability, SNR and rate.
//! - [`altitude_optimizer`]: stage 1, the altitude that maximises coverage.
//! - [`placement`]: stage 2, horizontal placement and spectrum allocation.
//! - [`channel_learning`]: online LoS/NLoS channel learning from RSS samples.
//! - [`mobility_forecast`]: echo state network trajectory forecasting.
//! - [`experiment_runner`]: config parsing, sweeps, missions and file output.

pub mod altitude_optimizer;
pub mod atg_channel;
pub mod channel_learning;
mod error;
pub mod experiment_runner;
pub mod geometry;
pub mod mobility_forecast;
pub mod placement;
pub mod scenario;
pub mod search;
pub mod seeds;

pub use error::{Error, Result};
pub use geometry::{Point2, Point3};

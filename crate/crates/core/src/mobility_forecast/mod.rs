//! UE trajectory forecasting with an echo state network (ESN).

pub mod esn;
pub mod geolife;
mod metrics;
pub mod synthetic;
pub mod trajectory;

pub use esn::{EsnConfig, EsnModel, Normalizer};
pub use metrics::{rmse, rmse_points, RmseReport};
pub use trajectory::{parse_trajectory_file, write_trajectory_file, TrajPoint, Trajectory};

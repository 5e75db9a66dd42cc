//! Smooth synthetic pedestrian trajectories.
//!
//! A random-waypoint walk with rounded turns, plus a lateral sinusoidal sway.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::mobility_forecast::trajectory::{TrajPoint, Trajectory};
use crate::scenario::Region;
use crate::seeds;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub steps: usize,
    pub dt: f64,
    pub speed_min: f64,
    pub speed_max: f64,
    /// Heading turn rate limit, rad/s.
    pub max_turn_rate: f64,
    pub sway_amplitude: f64,
    pub sway_period_s: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            steps: 400,
            dt: 1.0,
            speed_min: 0.8,
            speed_max: 2.0,
            max_turn_rate: 0.15,
            sway_amplitude: 3.0,
            sway_period_s: 60.0,
        }
    }
}

fn wrap_angle(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    (a + std::f64::consts::PI).rem_euclid(tau) - std::f64::consts::PI
}

pub fn synthetic_trajectory(region: &Region, cfg: &SyntheticConfig, seed: u64) -> Trajectory {
    let mut rng = seeds::rng(seed);
    let draw_point = |rng: &mut rand_chacha::ChaCha8Rng| {
        Point2::new(
            rng.random_range(region.x_min..=region.x_max),
            rng.random_range(region.y_min..=region.y_max),
        )
    };
    let mut pos = draw_point(&mut rng);
    let mut target = draw_point(&mut rng);
    let mut speed = rng.random_range(cfg.speed_min..=cfg.speed_max);
    let mut heading = (target.y - pos.y).atan2(target.x - pos.x);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let omega = std::f64::consts::TAU / cfg.sway_period_s;

    let mut points = Vec::with_capacity(cfg.steps);
    for k in 0..cfg.steps {
        let t = k as f64 * cfg.dt;
        // Sway is perpendicular to the current heading.
        let sway = cfg.sway_amplitude * (omega * t + phase).sin();
        let (x, y) = (pos.x - sway * heading.sin(), pos.y + sway * heading.cos());
        points.push(TrajPoint { t, x, y });

        if pos.distance(&target) < speed * cfg.dt * 5.0 {
            target = draw_point(&mut rng);
            speed = rng.random_range(cfg.speed_min..=cfg.speed_max);
        }
        let desired = (target.y - pos.y).atan2(target.x - pos.x);
        let turn = wrap_angle(desired - heading).clamp(-cfg.max_turn_rate * cfg.dt, cfg.max_turn_rate * cfg.dt);
        heading = wrap_angle(heading + turn);
        pos = Point2::new(pos.x + speed * cfg.dt * heading.cos(), pos.y + speed * cfg.dt * heading.sin());
    }
    Trajectory { points }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_increasing() {
        let region = Region::new(0.0, 500.0, 0.0, 500.0).unwrap();
        let cfg = SyntheticConfig::default();
        let a = synthetic_trajectory(&region, &cfg, 5);
        assert_eq!(a, synthetic_trajectory(&region, &cfg, 5));
        assert_eq!(a.len(), cfg.steps);
        assert!(Trajectory::new(a.points.clone()).is_ok());
    }

    #[test]
    fn steps_are_bounded() {
        let region = Region::new(0.0, 500.0, 0.0, 500.0).unwrap();
        let cfg = SyntheticConfig::default();
        let traj = synthetic_trajectory(&region, &cfg, 9);
        // Walking speed plus the sway's peak lateral speed.
        let bound = cfg.speed_max + cfg.sway_amplitude * std::f64::consts::TAU / cfg.sway_period_s + 1.0;
        for w in traj.points.windows(2) {
            assert!(w[0].position().distance(&w[1].position()) <= bound * cfg.dt);
        }
    }
}

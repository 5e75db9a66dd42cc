//! Stage 2 of placement: where to hover, whom to serve, and how to split the
//! spectrum.
//!
//! Two policies share stage 1 (see [`crate::altitude_optimizer`]):
//!
//! - [`Policy::OnDemand`] serves the largest coverable group whose demand
//!   floors fit the spectrum and backhaul, shrinks the disk to the smallest
//!   circle around them and re-tunes the altitude for that radius.
//! - [`Policy::MaxCoverage`] serves every user in the largest stage-1 disk with
//!   an equal spectrum split, with no guarantee on per-user rate.

pub mod allocation;
pub mod disk;
pub mod enclosing;

use serde::{Deserialize, Serialize};

pub use allocation::{allocate_bandwidth, allocate_links, Allocation, AllocationOutcome, Grant, UeLink};
pub use disk::{best_disk, DiskChoice};
pub use enclosing::{min_enclosing_circle, Circle};

use crate::altitude_optimizer::{optimal_altitude, AltitudeSearchConfig};
use crate::atg_channel::{mean_path_loss, AtgEnvironment, RadioConfig};
use crate::geometry::Point2;
use crate::scenario::{DemandLevel, Ue};
use crate::search::grid_then_golden;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    OnDemand,
    MaxCoverage,
}

impl Policy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Policy::OnDemand => "on-demand",
            Policy::MaxCoverage => "max-coverage",
        }
    }
}

impl std::str::FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "on-demand" | "on_demand" | "ondemand" => Ok(Policy::OnDemand),
            "max-coverage" | "max_coverage" | "smax" | "s-max" => Ok(Policy::MaxCoverage),
            other => Err(format!("unknown policy '{other}' (expected on-demand or max-coverage)")),
        }
    }
}

impl std::fmt::Display for Policy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementDiagnostics {
    pub stage1_altitude: f64,
    pub stage1_radius: f64,
    /// Users evicted for capacity, in eviction order.
    pub evicted: Vec<u32>,
    /// Users evicted because their link had no usable SNR.
    pub snr_floor: Vec<u32>,
    /// Allocate/shrink rounds until the served set was stable.
    pub rounds: usize,
    /// Σ rate / backhaul cap.
    pub backhaul_utilization: f64,
    pub backhaul_rtt_budget_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementResult {
    pub policy: Policy,
    pub center: Point2,
    pub altitude: f64,
    pub radius: f64,
    /// Served user ids, ascending.
    pub served: Vec<u32>,
    pub allocation: Allocation,
    pub diagnostics: PlacementDiagnostics,
}

impl PlacementResult {
    /// Served users whose granted rate is below their level's floor.
    pub fn violations(&self, ues: &[Ue], levels: &[DemandLevel]) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for ue in ues {
            if let Some(grant) = self.allocation.grants.get(&ue.id) {
                if grant.rate_bps < allocation::level_of(levels, ue.demand)?.min_rate {
                    out.push(ue.id);
                }
            }
        }
        Ok(out)
    }
}

/// Altitude in `[h_min, h_max]` minimising the mean loss at ground distance
/// `radius`. Never worse than `fallback`.
fn altitude_for_radius(
    radius: f64,
    fallback: f64,
    env: &AtgEnvironment,
    radio: &RadioConfig,
    search: &AltitudeSearchConfig,
) -> f64 {
    let neg_loss = |h: f64| -mean_path_loss(h, radius, env, radio.carrier_hz).unwrap_or(f64::INFINITY);
    let (h, value) = grid_then_golden(neg_loss, search.h_min, search.h_max, search.coarse_grid, search.refine_tol, 0.0);
    if value >= neg_loss(fallback) {
        h
    } else {
        fallback
    }
}

fn members(ues: &[Ue], ids: &[u32]) -> Vec<Ue> {
    // `ids` is ascending.
    ues.iter().filter(|u| ids.binary_search(&u.id).is_ok()).copied().collect()
}

fn check_unique_ids(ues: &[Ue]) -> Result<()> {
    let mut ids: Vec<u32> = ues.iter().map(|u| u.id).collect();
    ids.sort_unstable();
    if ids.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("user ids must be unique".into()));
    }
    Ok(())
}

/// Two-stage on-demand placement.
///
/// After stage 1 and the best stage-1 disk, allocation and repositioning
/// alternate: allocate at the current position (evicting as needed), move to
/// the smallest circle around the kept users at the altitude that minimises
/// edge loss, and allocate again. The loop ends when an allocation at the
/// repositioned UAV evicts nobody, so reported rates always match the reported
/// position.
pub fn place_on_demand(
    ues: &[Ue],
    levels: &[DemandLevel],
    env: &AtgEnvironment,
    radio: &RadioConfig,
    search: &AltitudeSearchConfig,
) -> Result<PlacementResult> {
    if ues.is_empty() {
        return Err(Error::NoPlacement("no users to place for".into()));
    }
    check_unique_ids(ues)?;
    let stage1 = optimal_altitude(env, radio, search)?;
    let disk = best_disk(ues, stage1.max_radius);
    if disk.covered.is_empty() {
        return Err(Error::NoPlacement("no user is coverable".into()));
    }

    let mut group = members(ues, &disk.covered);
    let mut center = disk.center;
    let mut altitude = stage1.altitude;
    let mut radius = stage1.max_radius;
    let mut evicted = Vec::new();
    let mut snr_floor = Vec::new();
    let mut rounds = 0;
    let mut repositioned = false;

    let outcome = loop {
        rounds += 1;
        let outcome = allocate_bandwidth(&group, &center, altitude, env, radio, levels)?;
        if outcome.kept.is_empty() {
            return Err(Error::NoPlacement("no covered user's demand fits the capacity".into()));
        }
        evicted.extend_from_slice(&outcome.evicted);
        snr_floor.extend_from_slice(&outcome.snr_floor);
        if repositioned && outcome.evicted.is_empty() {
            break outcome;
        }
        group = members(&group, &outcome.kept);
        let points: Vec<Point2> = group.iter().map(|u| u.position).collect();
        let circle = min_enclosing_circle(&points)?;
        center = circle.center;
        radius = circle.radius.min(stage1.max_radius);
        altitude = altitude_for_radius(radius, altitude, env, radio, search);
        repositioned = true;
    };

    let total_rate = outcome.allocation.total_rate();
    Ok(PlacementResult {
        policy: Policy::OnDemand,
        center,
        altitude,
        radius,
        served: outcome.kept.clone(),
        diagnostics: PlacementDiagnostics {
            stage1_altitude: stage1.altitude,
            stage1_radius: stage1.max_radius,
            evicted,
            snr_floor,
            rounds,
            backhaul_utilization: total_rate / radio.backhaul_cap_bps,
            backhaul_rtt_budget_ms: radio.backhaul_rtt_budget_ms,
        },
        allocation: outcome.allocation,
    })
}

/// Maximum-coverage baseline: everyone in the largest stage-1 disk, equal
/// spectrum split, rates scaled down uniformly if they exceed the backhaul.
pub fn place_max_coverage(
    ues: &[Ue],
    env: &AtgEnvironment,
    radio: &RadioConfig,
    search: &AltitudeSearchConfig,
) -> Result<PlacementResult> {
    if ues.is_empty() {
        return Err(Error::NoPlacement("no users to place for".into()));
    }
    check_unique_ids(ues)?;
    let stage1 = optimal_altitude(env, radio, search)?;
    let disk = best_disk(ues, stage1.max_radius);
    if disk.covered.is_empty() {
        return Err(Error::NoPlacement("no user is coverable".into()));
    }
    let group = members(ues, &disk.covered);
    let share = radio.bandwidth_hz / group.len() as f64;

    let mut rates = Vec::with_capacity(group.len());
    let mut snr_floor = Vec::new();
    for ue in &group {
        let e = allocation::link_efficiency(ue, &disk.center, stage1.altitude, env, radio)?;
        if !(e > 0.0) {
            snr_floor.push(ue.id);
        }
        rates.push(share * e.max(0.0));
    }
    let total: f64 = rates.iter().sum();
    if total > radio.backhaul_cap_bps {
        let mut scale = radio.backhaul_cap_bps / total;
        while rates.iter().map(|r| r * scale).sum::<f64>() > radio.backhaul_cap_bps {
            scale *= 1.0 - 1e-12;
        }
        rates.iter_mut().for_each(|r| *r *= scale);
    }

    let grants = group
        .iter()
        .zip(&rates)
        .map(|(ue, &rate_bps)| (ue.id, Grant { bandwidth_hz: share, rate_bps }))
        .collect();
    let allocation = Allocation { grants };
    let total_rate = allocation.total_rate();
    Ok(PlacementResult {
        policy: Policy::MaxCoverage,
        center: disk.center,
        altitude: stage1.altitude,
        radius: stage1.max_radius,
        served: disk.covered,
        diagnostics: PlacementDiagnostics {
            stage1_altitude: stage1.altitude,
            stage1_radius: stage1.max_radius,
            evicted: Vec::new(),
            snr_floor,
            rounds: 1,
            backhaul_utilization: total_rate / radio.backhaul_cap_bps,
            backhaul_rtt_budget_ms: radio.backhaul_rtt_budget_ms,
        },
        allocation,
    })
}

/// Dispatches on `policy`.
pub fn place(
    policy: Policy,
    ues: &[Ue],
    levels: &[DemandLevel],
    env: &AtgEnvironment,
    radio: &RadioConfig,
    search: &AltitudeSearchConfig,
) -> Result<PlacementResult> {
    match policy {
        Policy::OnDemand => place_on_demand(ues, levels, env, radio, search),
        Policy::MaxCoverage => place_max_coverage(ues, env, radio, search),
    }
}

//! Demand-aware bandwidth allocation with greedy eviction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::atg_channel::{mean_path_loss, snr_db, spectral_efficiency, AtgEnvironment, RadioConfig};
use crate::geometry::Point2;
use crate::scenario::{DemandLevel, Ue};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grant {
    pub bandwidth_hz: f64,
    pub rate_bps: f64,
}

/// Per-user grants keyed by user id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub grants: BTreeMap<u32, Grant>,
}

impl Allocation {
    pub fn total_bandwidth(&self) -> f64 {
        self.grants.values().map(|g| g.bandwidth_hz).sum()
    }

    pub fn total_rate(&self) -> f64 {
        self.grants.values().map(|g| g.rate_bps).sum()
    }
}

/// What the allocator needs to know about one user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UeLink {
    pub id: u32,
    pub min_rate: f64,
    /// Spectral efficiency in bits/s/Hz.
    pub efficiency: f64,
}

impl UeLink {
    /// Bandwidth needed to reach the rate floor.
    pub fn required_bandwidth(&self) -> f64 {
        self.min_rate / self.efficiency
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationOutcome {
    pub allocation: Allocation,
    /// Ids still served, ascending.
    pub kept: Vec<u32>,
    /// Ids removed, in eviction order.
    pub evicted: Vec<u32>,
    /// Ids evicted because their link had no usable spectral efficiency.
    pub snr_floor: Vec<u32>,
}

/// Spectral efficiency of the link from a UAV at `(center, altitude)` to `ue`.
pub fn link_efficiency(
    ue: &Ue,
    center: &Point2,
    altitude: f64,
    env: &AtgEnvironment,
    radio: &RadioConfig,
) -> Result<f64> {
    let pl = mean_path_loss(altitude, ue.position.distance(center), env, radio.carrier_hz)?;
    Ok(spectral_efficiency(snr_db(pl, radio)))
}

pub fn level_of(levels: &[DemandLevel], id: u32) -> Result<&DemandLevel> {
    levels
        .iter()
        .find(|l| l.id == id)
        .ok_or_else(|| Error::Configuration(format!("unknown demand level {id}")))
}

/// Allocates spectrum to the served users from a UAV at `(center, altitude)`.
pub fn allocate_bandwidth(
    served: &[Ue],
    center: &Point2,
    altitude: f64,
    env: &AtgEnvironment,
    radio: &RadioConfig,
    levels: &[DemandLevel],
) -> Result<AllocationOutcome> {
    if served.is_empty() {
        return Err(Error::Domain("allocation needs at least one served user".into()));
    }
    let links = served
        .iter()
        .map(|ue| {
            Ok(UeLink {
                id: ue.id,
                min_rate: level_of(levels, ue.demand)?.min_rate,
                efficiency: link_efficiency(ue, center, altitude, env, radio)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(allocate_links(&links, radio.bandwidth_hz, radio.backhaul_cap_bps))
}

/// Core allocator over precomputed links.
///
/// Users with zero efficiency are evicted first. Then, while the required
/// bandwidth exceeds `bandwidth` or the rate floors exceed `backhaul_cap`, the
/// user needing the most bandwidth is evicted (ties: lower efficiency, then
/// higher id). Survivors get exactly their required bandwidth; leftover
/// bandwidth is shared in proportion to need as far as the backhaul allows.
pub fn allocate_links(links: &[UeLink], bandwidth: f64, backhaul_cap: f64) -> AllocationOutcome {
    let mut active: Vec<UeLink> = links.to_vec();
    active.sort_by_key(|l| l.id);

    let mut evicted = Vec::new();
    let mut snr_floor = Vec::new();
    active.retain(|l| {
        let usable = l.efficiency > 0.0 && l.required_bandwidth().is_finite();
        if !usable {
            snr_floor.push(l.id);
            evicted.push(l.id);
        }
        usable
    });

    loop {
        let need: f64 = active.iter().map(UeLink::required_bandwidth).sum();
        let floor: f64 = active.iter().map(|l| l.min_rate).sum();
        if active.is_empty() || (need <= bandwidth && floor <= backhaul_cap) {
            break;
        }
        let worst = active
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                a.required_bandwidth()
                    .total_cmp(&b.required_bandwidth())
                    .then(b.efficiency.total_cmp(&a.efficiency))
                    .then(a.id.cmp(&b.id))
            })
            .map(|(k, _)| k)
            .expect("nonempty");
        evicted.push(active.remove(worst).id);
    }

    let need: f64 = active.iter().map(UeLink::required_bandwidth).sum();
    let floor: f64 = active.iter().map(|l| l.min_rate).sum();
    let leftover = (bandwidth - need).max(0.0);
    let mut factor = 1.0;
    if leftover > 0.0 && need > 0.0 {
        // Scaling every grant by `factor` keeps rates proportional to floors:
        // bandwidth grows to need·factor, rate to floor·factor.
        let by_bandwidth = 1.0 + leftover / need;
        let by_backhaul = backhaul_cap / floor;
        factor = by_bandwidth.min(by_backhaul).max(1.0);
    }
    let grants_for = |factor: f64| -> BTreeMap<u32, Grant> {
        active
            .iter()
            .map(|l| {
                let grant = Grant { bandwidth_hz: l.required_bandwidth() * factor, rate_bps: l.min_rate * factor };
                (l.id, grant)
            })
            .collect()
    };
    let mut grants = grants_for(factor);
    // Rounding can push the sums an ulp over a limit; back off towards 1.
    while factor > 1.0 {
        let bw: f64 = grants.values().map(|g| g.bandwidth_hz).sum();
        let rate: f64 = grants.values().map(|g| g.rate_bps).sum();
        if bw <= bandwidth && rate <= backhaul_cap {
            break;
        }
        factor = (1.0 + (factor - 1.0) * (1.0 - 1e-9)).max(1.0);
        if factor - 1.0 < 1e-15 {
            factor = 1.0;
        }
        grants = grants_for(factor);
    }

    AllocationOutcome {
        kept: active.iter().map(|l| l.id).collect(),
        allocation: Allocation { grants },
        evicted,
        snr_floor,
    }
}

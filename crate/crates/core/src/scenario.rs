//! Synthetic flash crowds.
//!
//! Users are drawn from a Gaussian mixture of hotspots truncated to the
//! serving region, tagged with a demand level and rasterised into a density
//! map. Hotspots drift as independent Gaussian random walks between epochs.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::seeds;
use crate::{Error, Result};

/// Hotspot spreads below this are clamped.
pub const MIN_SIGMA_M: f64 = 1e-6;
/// Rejection attempts per user before the last draw is clamped into the region.
pub const MAX_REJECTION_ATTEMPTS: usize = 1000;
const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Region {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let region = Self { x_min, x_max, y_min, y_max };
        region.validate()?;
        Ok(region)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(Error::Configuration(format!(
                "region needs x_min < x_max and y_min < y_max, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn clamp(&self, p: Point2) -> Point2 {
        Point2::new(p.x.clamp(self.x_min, self.x_max), p.y.clamp(self.y_min, self.y_max))
    }

    pub fn center(&self) -> Point2 {
        Point2::new((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

/// An operator-defined service class with a per-user rate floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandLevel {
    pub id: u32,
    /// Minimum rate in bits/second.
    pub min_rate: f64,
    /// Share of users in this class.
    pub fraction: f64,
}

/// Checks the per-level and the joint invariants of a demand table.
pub fn validate_levels(levels: &[DemandLevel]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Configuration("at least one demand level is required".into()));
    }
    for level in levels {
        if !(level.min_rate > 0.0 && level.min_rate.is_finite()) {
            return Err(Error::Configuration(format!(
                "demand level {} needs min_rate > 0, got {}",
                level.id, level.min_rate
            )));
        }
        if !(level.fraction >= 0.0 && level.fraction.is_finite()) {
            return Err(Error::Configuration(format!(
                "demand level {} has invalid fraction {}",
                level.id, level.fraction
            )));
        }
    }
    for (i, a) in levels.iter().enumerate() {
        if levels[..i].iter().any(|b| b.id == a.id) {
            return Err(Error::Configuration(format!("duplicate demand level id {}", a.id)));
        }
    }
    let total: f64 = levels.iter().map(|l| l.fraction).sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Configuration(format!(
            "demand level fractions must sum to 1, got {total}"
        )));
    }
    Ok(())
}

/// A user equipment on the ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ue {
    pub id: u32,
    pub position: Point2,
    /// Id of the user's [`DemandLevel`].
    pub demand: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HotSpot {
    pub center: Point2,
    pub sigma: f64,
    pub weight: f64,
}

impl HotSpot {
    pub fn new(center: Point2, sigma: f64, weight: f64) -> Self {
        Self { center, sigma, weight }
    }
}

pub fn validate_hotspots(hotspots: &[HotSpot]) -> Result<()> {
    for h in hotspots {
        if !(h.sigma >= 0.0 && h.sigma.is_finite()) {
            return Err(Error::Configuration(format!("hotspot sigma must be >= 0, got {}", h.sigma)));
        }
        if !(h.weight >= 0.0 && h.weight.is_finite()) {
            return Err(Error::Configuration(format!(
                "hotspot weight must be >= 0, got {}",
                h.weight
            )));
        }
        if !(h.center.x.is_finite() && h.center.y.is_finite()) {
            return Err(Error::Configuration("hotspot center must be finite".into()));
        }
    }
    if !hotspots.is_empty() {
        let total: f64 = hotspots.iter().map(|h| h.weight).sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Configuration(format!(
                "hotspot weights must sum to 1, got {total}"
            )));
        }
    }
    Ok(())
}

/// Draws `n_ues` users from the hotspot mixture, truncated to `region`.
///
/// All users get demand level 0; see [`assign_demands`].
pub fn generate_crowd(region: &Region, hotspots: &[HotSpot], n_ues: usize, seed: u64) -> Result<Vec<Ue>> {
    Ok(generate_crowd_labeled(region, hotspots, n_ues, seed)?.0)
}

/// [`generate_crowd`] plus, per user, the index of the hotspot it was drawn from.
///
/// Users are drawn sequentially from a single stream, so the crowd for
/// `n` users is a prefix of the crowd for any `m > n` with the same seed.
pub fn generate_crowd_labeled(
    region: &Region,
    hotspots: &[HotSpot],
    n_ues: usize,
    seed: u64,
) -> Result<(Vec<Ue>, Vec<usize>)> {
    region.validate()?;
    validate_hotspots(hotspots)?;
    if n_ues == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if hotspots.is_empty() {
        return Err(Error::Configuration("cannot place users without hotspots".into()));
    }

    let chooser = WeightedIndex::new(hotspots.iter().map(|h| h.weight))
        .map_err(|e| Error::Configuration(format!("hotspot weights: {e}")))?;
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut rng = seeds::rng(seed);

    let mut ues = Vec::with_capacity(n_ues);
    let mut labels = Vec::with_capacity(n_ues);
    for id in 0..n_ues {
        let k = chooser.sample(&mut rng);
        let spot = &hotspots[k];
        let sigma = spot.sigma.max(MIN_SIGMA_M);
        let mut p = spot.center;
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            p = Point2::new(
                spot.center.x + sigma * unit.sample(&mut rng),
                spot.center.y + sigma * unit.sample(&mut rng),
            );
            if region.contains(&p) {
                break;
            }
        }
        ues.push(Ue { id: id as u32, position: region.clamp(p), demand: 0 });
        labels.push(k);
    }
    Ok((ues, labels))
}

/// Moves every hotspot center by an independent Gaussian step of standard
/// deviation `drift_sigma * sqrt(dt)` per axis, clamped to `region`.
pub fn evolve_hotspots(
    hotspots: &[HotSpot],
    region: &Region,
    dt: f64,
    drift_sigma: f64,
    seed: u64,
) -> Result<Vec<HotSpot>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    if !(drift_sigma >= 0.0 && drift_sigma.is_finite()) {
        return Err(Error::Domain(format!("drift_sigma must be >= 0, got {drift_sigma}")));
    }
    if drift_sigma == 0.0 {
        return Ok(hotspots.to_vec());
    }
    let step = Normal::new(0.0, drift_sigma * dt.sqrt())
        .map_err(|e| Error::Domain(format!("drift: {e}")))?;
    let mut rng = seeds::rng(seed);
    Ok(hotspots
        .iter()
        .map(|h| {
            let moved = Point2::new(h.center.x + step.sample(&mut rng), h.center.y + step.sample(&mut rng));
            HotSpot { center: region.clamp(moved), ..*h }
        })
        .collect())
}

/// Assigns every user a demand level drawn independently with the level
/// fractions as probabilities.
pub fn assign_demands(ues: &[Ue], levels: &[DemandLevel], seed: u64) -> Result<Vec<Ue>> {
    validate_levels(levels)?;
    let chooser = WeightedIndex::new(levels.iter().map(|l| l.fraction))
        .map_err(|e| Error::Configuration(format!("demand fractions: {e}")))?;
    let mut rng = seeds::rng(seed);
    Ok(ues
        .iter()
        .map(|ue| Ue { demand: levels[chooser.sample(&mut rng)].id, ..*ue })
        .collect())
}

/// Gridded user counts. `counts[i][j]` covers
/// `[origin.x + i·cell, origin.x + (i+1)·cell) × [origin.y + j·cell, …)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrowdField {
    pub origin: Point2,
    pub cell_size: f64,
    pub counts: Vec<Vec<u32>>,
}

impl CrowdField {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().map(|&c| u64::from(c)).sum()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.counts.len(), self.counts.first().map_or(0, Vec::len))
    }
}

/// Rasterises users into half-open cells anchored at the region's lower-left
/// corner. Users on the region's upper edge, or outside it, land in the
/// nearest border cell so the total count is always preserved.
pub fn density_map(ues: &[Ue], region: &Region, cell_size: f64) -> Result<CrowdField> {
    region.validate()?;
    if !(cell_size > 0.0 && cell_size.is_finite()) {
        return Err(Error::Domain(format!("cell_size must be > 0, got {cell_size}")));
    }
    let nx = ((region.width() / cell_size).ceil() as usize).max(1);
    let ny = ((region.height() / cell_size).ceil() as usize).max(1);
    let mut counts = vec![vec![0u32; ny]; nx];
    let cell_index = |offset: f64, n: usize| -> usize {
        let raw = (offset / cell_size).floor();
        if raw <= 0.0 {
            0
        } else {
            (raw as usize).min(n - 1)
        }
    };
    for ue in ues {
        let i = cell_index(ue.position.x - region.x_min, nx);
        let j = cell_index(ue.position.y - region.y_min, ny);
        counts[i][j] += 1;
    }
    Ok(CrowdField { origin: Point2::new(region.x_min, region.y_min), cell_size, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region() -> Region {
        Region::new(0.0, 1000.0, 0.0, 1000.0).unwrap()
    }

    #[test]
    fn zero_users_is_empty_even_without_hotspots() {
        assert!(generate_crowd(&region(), &[], 0, 1).unwrap().is_empty());
    }

    #[test]
    fn users_without_hotspots_is_an_error() {
        assert!(matches!(generate_crowd(&region(), &[], 3, 1), Err(Error::Configuration(_))));
    }

    #[test]
    fn degenerate_hotspot_collapses_to_center() {
        let spot = HotSpot::new(Point2::new(400.0, 600.0), 0.0, 1.0);
        let ues = generate_crowd(&region(), &[spot], 5, 9).unwrap();
        assert_eq!(ues.len(), 5);
        for ue in ues {
            assert!(ue.position.distance(&spot.center) < 1e-3);
        }
    }

    #[test]
    fn equal_weight_assignment_is_binomial() {
        let spots = [
            HotSpot::new(Point2::new(200.0, 200.0), 50.0, 0.5),
            HotSpot::new(Point2::new(800.0, 800.0), 50.0, 0.5),
        ];
        let (_, labels) = generate_crowd_labeled(&region(), &spots, 10_000, 3).unwrap();
        let first = labels.iter().filter(|&&k| k == 0).count() as f64;
        // Binomial(10000, 0.5): sd = sqrt(10000 * 0.25) = 50.
        assert!((first - 5000.0).abs() <= 3.0 * 50.0, "count {first}");
    }

    #[test]
    fn weights_must_sum_to_one() {
        let spots = [HotSpot::new(Point2::new(0.0, 0.0), 1.0, 0.4)];
        assert!(generate_crowd(&region(), &spots, 1, 0).is_err());
    }

    #[test]
    fn crowd_is_a_prefix_for_larger_n() {
        let spots = [HotSpot::new(Point2::new(0.0, 0.0), 300.0, 1.0)];
        let small = generate_crowd(&region(), &spots, 50, 5).unwrap();
        let large = generate_crowd(&region(), &spots, 200, 5).unwrap();
        assert_eq!(&large[..50], &small[..]);
    }

    #[test]
    fn zero_drift_is_identity() {
        let spots = vec![HotSpot::new(Point2::new(10.0, 20.0), 5.0, 1.0)];
        assert_eq!(evolve_hotspots(&spots, &region(), 1.0, 0.0, 4).unwrap(), spots);
    }

    #[test]
    fn drift_std_matches_sigma_sqrt_dt() {
        let spot = HotSpot::new(Point2::new(500.0, 500.0), 5.0, 1.0);
        let n = 4000;
        let dx: Vec<f64> = (0..n)
            .map(|s| {
                let moved = evolve_hotspots(&[spot], &region(), 1.0, 2.0, s).unwrap();
                moved[0].center.x - spot.center.x
            })
            .collect();
        let mean = dx.iter().sum::<f64>() / n as f64;
        let var = dx.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var.sqrt() - 2.0).abs() < 0.2, "std {}", var.sqrt());
    }

    #[test]
    fn corner_hotspot_stays_inside() {
        let spot = HotSpot::new(Point2::new(0.0, 1000.0), 5.0, 1.0);
        for s in 0..50 {
            let moved = evolve_hotspots(&[spot], &region(), 10.0, 500.0, s).unwrap();
            assert!(region().contains(&moved[0].center));
            assert_eq!(moved[0].sigma, 5.0);
            assert_eq!(moved[0].weight, 1.0);
        }
    }

    #[test]
    fn nonpositive_dt_rejected() {
        assert!(evolve_hotspots(&[], &region(), 0.0, 1.0, 0).is_err());
    }

    fn ue_at(id: u32, x: f64, y: f64) -> Ue {
        Ue { id, position: Point2::new(x, y), demand: 0 }
    }

    #[test]
    fn density_single_cell() {
        let ues = [ue_at(0, 5.0, 5.0), ue_at(1, 6.0, 7.0), ue_at(2, 9.9, 0.1)];
        let field = density_map(&ues, &Region::new(0.0, 30.0, 0.0, 30.0).unwrap(), 10.0).unwrap();
        assert_eq!(field.shape(), (3, 3));
        assert_eq!(field.counts[0][0], 3);
        assert_eq!(field.total(), 3);
    }

    #[test]
    fn interior_boundary_goes_to_higher_cell() {
        let ues = [ue_at(0, 10.0, 20.0)];
        let field = density_map(&ues, &Region::new(0.0, 30.0, 0.0, 30.0).unwrap(), 10.0).unwrap();
        assert_eq!(field.counts[1][2], 1);
    }

    #[test]
    fn outer_edge_kept_in_last_cell() {
        let ues = [ue_at(0, 30.0, 30.0)];
        let field = density_map(&ues, &Region::new(0.0, 30.0, 0.0, 30.0).unwrap(), 10.0).unwrap();
        assert_eq!(field.counts[2][2], 1);
    }

    fn levels(fr: &[f64]) -> Vec<DemandLevel> {
        fr.iter()
            .enumerate()
            .map(|(i, &f)| DemandLevel { id: i as u32, min_rate: 1e6 * (i + 1) as f64, fraction: f })
            .collect()
    }

    #[test]
    fn single_level_assigned_to_everyone() {
        let ues: Vec<Ue> = (0..20).map(|i| ue_at(i, 1.0, 1.0)).collect();
        let out = assign_demands(&ues, &levels(&[1.0]), 0).unwrap();
        assert!(out.iter().all(|u| u.demand == 0));
    }

    #[test]
    fn even_split_within_binomial_band() {
        let ues: Vec<Ue> = (0..10_000).map(|i| ue_at(i, 1.0, 1.0)).collect();
        let out = assign_demands(&ues, &levels(&[0.5, 0.5]), 11).unwrap();
        let zero = out.iter().filter(|u| u.demand == 0).count();
        // sd = 50; [4700, 5300] is a 6-sigma band.
        assert!((4700..=5300).contains(&zero), "{zero}");
    }

    #[test]
    fn zero_fraction_never_assigned() {
        let ues: Vec<Ue> = (0..2000).map(|i| ue_at(i, 1.0, 1.0)).collect();
        let out = assign_demands(&ues, &levels(&[0.7, 0.0, 0.3]), 2).unwrap();
        assert!(out.iter().all(|u| u.demand != 1));
    }

    #[test]
    fn empty_levels_rejected() {
        assert!(assign_demands(&[], &[], 0).is_err());
    }
}

//! Maximum-cardinality disk of bounded radius.
//!
//! Some optimal disk can always be translated until it either is centred on a
//! user or has two users on its boundary, so the candidate centers are every
//! user position plus both radius-`r` circle centers through every pair of
//! users at most `2r` apart. An angular sweep around each anchor finds the
//! pair centers that can reach the best count so far; only those are counted
//! exactly against a bucket grid of cell size `r`. Anchors run in parallel.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::geometry::Point2;
use crate::placement::enclosing::min_enclosing_circle;
use crate::scenario::Ue;

#[derive(Debug, Clone, PartialEq)]
pub struct DiskChoice {
    pub center: Point2,
    /// Covered user ids, ascending.
    pub covered: Vec<u32>,
}

/// Cover test slack relative to the radius; pair-circle centers are only
/// accurate to rounding.
fn cover_slack(r: f64) -> f64 {
    1e-9 * r.max(1.0)
}

struct Buckets {
    cell: f64,
    origin: Point2,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl Buckets {
    fn new(points: &[Point2], cell: f64) -> Self {
        let origin = points.iter().fold(Point2::new(f64::INFINITY, f64::INFINITY), |acc, p| {
            Point2::new(acc.x.min(p.x), acc.y.min(p.y))
        });
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut buckets = Self { cell, origin, cells: HashMap::new() };
        for (i, p) in points.iter().enumerate() {
            cells.entry(buckets.key(p)).or_default().push(i);
        }
        buckets.cells = cells;
        buckets
    }

    fn key(&self, p: &Point2) -> (i64, i64) {
        (
            ((p.x - self.origin.x) / self.cell).floor() as i64,
            ((p.y - self.origin.y) / self.cell).floor() as i64,
        )
    }

    /// Indices of points in cells within `reach` cells of `p`'s cell.
    fn around<'a>(&'a self, p: &Point2, reach: i64) -> impl Iterator<Item = usize> + 'a {
        let (cx, cy) = self.key(p);
        (cx - reach..=cx + reach)
            .flat_map(move |x| (cy - reach..=cy + reach).map(move |y| (x, y)))
            .filter_map(move |k| self.cells.get(&k))
            .flatten()
            .copied()
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-independent fingerprint of a covered set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct SetKey {
    count: usize,
    sum: u64,
    xor: u64,
}

#[derive(Default)]
struct Best {
    count: usize,
    /// Lexicographically smallest center seen for each distinct covered set.
    sets: HashMap<SetKey, Point2>,
}

fn lex_less(a: &Point2, b: &Point2) -> bool {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)).is_lt()
}

impl Best {
    fn offer(&mut self, key: SetKey, center: Point2) {
        if key.count > self.count {
            self.count = key.count;
            self.sets.clear();
        }
        if key.count == self.count && key.count > 0 {
            self.sets
                .entry(key)
                .and_modify(|c| {
                    if lex_less(&center, c) {
                        *c = center;
                    }
                })
                .or_insert(center);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if other.count > self.count {
            return other.merge(self);
        }
        if other.count == self.count {
            for (key, center) in other.sets {
                self.offer(key, center);
            }
        }
        self
    }
}

/// Pair-circle centers of radius `r` through `a` and `b`.
fn pair_centers(a: &Point2, b: &Point2, r: f64) -> Option<[Point2; 2]> {
    let d2 = a.distance_sq(b);
    if d2 > 4.0 * r * r || d2 == 0.0 {
        return None;
    }
    let d = d2.sqrt();
    let m = a.midpoint(b);
    let h = (r * r - d2 / 4.0).max(0.0).sqrt();
    let (ux, uy) = (-(b.y - a.y) / d, (b.x - a.x) / d);
    Some([Point2::new(m.x + h * ux, m.y + h * uy), Point2::new(m.x - h * ux, m.y - h * uy)])
}

/// Angular sweep around anchor `i`: a disk of radius `r` with `i` on its
/// boundary is centred at `a + r·(cos θ, sin θ)` and covers partner `j` for
/// θ in a closed interval. The sweep counts how many intervals overlap at the
/// start of each interval; that start is the pair-circle center of `(i, j)`
/// on the right of `a → b`.
///
/// Intervals are widened beyond the cover slack, so the count never falls
/// short of what the exact cover test finds at that center.
struct AnchorSweep {
    /// The anchor plus partners coincident with it.
    base: usize,
    /// `(start angle, partner)`, start in [-π, π), with half-width.
    intervals: Vec<(f64, f64, usize)>,
}

impl AnchorSweep {
    fn new(points: &[Point2], buckets: &Buckets, i: usize, r: f64) -> Self {
        let a = points[i];
        let s = 2.0 * cover_slack(r);
        let mut base = 1;
        let mut intervals = Vec::new();
        for j in buckets.around(&a, 2) {
            if j == i {
                continue;
            }
            let d = points[j].distance(&a);
            if d == 0.0 {
                base += 1;
                continue;
            }
            if d > 2.0 * r + s {
                continue;
            }
            // |c(θ) − b|² = r² + d² − 2rd·cos(θ − φ) ≤ (r + s)².
            let cos_alpha = ((d * d - 2.0 * r * s - s * s) / (2.0 * r * d)).clamp(-1.0, 1.0);
            let alpha = cos_alpha.acos() + 1e-12;
            let phi = (points[j].y - a.y).atan2(points[j].x - a.x);
            let lo = (phi - alpha + PI).rem_euclid(TAU) - PI;
            intervals.push((lo, alpha, j));
        }
        Self { base, intervals }
    }

    /// Partners whose interval start is covered by at least `threshold`
    /// disks' worth of users, anchor included.
    fn candidates(&self, threshold: usize) -> Vec<usize> {
        // (angle, kind, partner); kind 0 = start sorts before 1 = end.
        let mut events: Vec<(f64, u8, usize)> = Vec::with_capacity(2 * self.intervals.len());
        let mut depth = self.base;
        for &(lo, alpha, j) in &self.intervals {
            let hi = lo + 2.0 * alpha;
            events.push((lo, 0, j));
            if hi >= PI {
                // Wraps: already open at -π.
                depth += 1;
                events.push((hi - TAU, 1, j));
            } else {
                events.push((hi, 1, j));
            }
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

        let mut out = Vec::new();
        let mut group: Vec<usize> = Vec::new();
        for (k, &(angle, kind, j)) in events.iter().enumerate() {
            if kind == 1 {
                depth -= 1;
                continue;
            }
            depth += 1;
            group.push(j);
            let group_ends = events.get(k + 1).is_none_or(|n| n.1 == 1 || n.0 != angle);
            if group_ends {
                if depth >= threshold {
                    out.append(&mut group);
                }
                group.clear();
            }
        }
        out
    }
}

/// The largest set of users a disk of radius `r_max` can enclose.
///
/// Ties between candidate sets go to the set with the smaller enclosing
/// circle, then to the lexicographically smaller `(x, y)` center. An empty
/// input yields center `(0, 0)` and nothing covered.
pub fn best_disk(ues: &[Ue], r_max: f64) -> DiskChoice {
    if ues.is_empty() || !(r_max > 0.0) {
        return DiskChoice { center: Point2::new(0.0, 0.0), covered: Vec::new() };
    }
    let points: Vec<Point2> = ues.iter().map(|u| u.position).collect();
    let fingerprints: Vec<(u64, u64)> = ues
        .iter()
        .map(|u| (mix64(u64::from(u.id)), mix64(u64::from(u.id) ^ 0xa076_1d64_78bd_642f)))
        .collect();
    let buckets = Buckets::new(&points, r_max);
    let reach_sq = (r_max + cover_slack(r_max)).powi(2);

    let evaluate = |center: &Point2| -> SetKey {
        let mut key = SetKey { count: 0, sum: 0, xor: 0 };
        for k in buckets.around(center, 1) {
            if points[k].distance_sq(center) <= reach_sq {
                key.count += 1;
                key.sum = key.sum.wrapping_add(fingerprints[k].0);
                key.xor ^= fingerprints[k].1;
            }
        }
        key
    };

    // Lower bound from user-centred disks; anchors that cannot beat it are
    // skipped.
    let lower = points.par_iter().map(|p| evaluate(p).count).max().unwrap_or(0);

    let best = (0..points.len())
        .into_par_iter()
        .fold(Best::default, |mut best, i| {
            let a = &points[i];
            best.offer(evaluate(a), *a);
            let threshold = lower.max(best.count);
            let sweep = AnchorSweep::new(&points, &buckets, i, r_max);
            if sweep.base + sweep.intervals.len() < threshold {
                return best;
            }
            for j in sweep.candidates(threshold) {
                if let Some(centers) = pair_centers(a, &points[j], r_max) {
                    let c = centers[1];
                    best.offer(evaluate(&c), c);
                }
            }
            best
        })
        .reduce(Best::default, Best::merge);

    let mut choice: Option<(f64, Point2, Vec<u32>)> = None;
    let mut sets: Vec<(SetKey, Point2)> = best.sets.into_iter().collect();
    sets.sort_by(|a, b| a.1.x.total_cmp(&b.1.x).then(a.1.y.total_cmp(&b.1.y)));
    for (_, center) in sets {
        let mut covered: Vec<usize> = buckets
            .around(&center, 1)
            .filter(|&k| points[k].distance_sq(&center) <= reach_sq)
            .collect();
        covered.sort_unstable();
        let member_points: Vec<Point2> = covered.iter().map(|&k| points[k]).collect();
        let radius = min_enclosing_circle(&member_points).map_or(0.0, |c| c.radius);
        let better = match &choice {
            None => true,
            Some((r, c, _)) => radius < *r || (radius == *r && lex_less(&center, c)),
        };
        if better {
            let mut ids: Vec<u32> = covered.iter().map(|&k| ues[k].id).collect();
            ids.sort_unstable();
            choice = Some((radius, center, ids));
        }
    }
    let (_, center, covered) = choice.expect("at least one user is always coverable");
    DiskChoice { center, covered }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ues(v: &[(f64, f64)]) -> Vec<Ue> {
        v.iter()
            .enumerate()
            .map(|(i, &(x, y))| Ue { id: i as u32, position: Point2::new(x, y), demand: 0 })
            .collect()
    }

    #[test]
    fn empty_input() {
        let choice = best_disk(&[], 5.0);
        assert!(choice.covered.is_empty());
        assert_eq!(choice.center, Point2::new(0.0, 0.0));
    }

    #[test]
    fn single_user() {
        let choice = best_disk(&ues(&[(3.0, 4.0)]), 1.0);
        assert_eq!(choice.center, Point2::new(3.0, 4.0));
        assert_eq!(choice.covered, vec![0]);
    }

    #[test]
    fn picks_the_close_pair() {
        let choice = best_disk(&ues(&[(0.0, 0.0), (1.0, 0.0), (10.0, 0.0)]), 1.0);
        assert_eq!(choice.covered, vec![0, 1]);
    }

    #[test]
    fn pair_circle_needed() {
        // Three points on a circle of radius 1 around (0, 0); no user-centred
        // disk of radius 1 holds all three.
        let pts: Vec<(f64, f64)> = [90.0f64, 210.0, 330.0]
            .iter()
            .map(|a| (a.to_radians().cos(), a.to_radians().sin()))
            .collect();
        let choice = best_disk(&ues(&pts), 1.0 + 1e-6);
        assert_eq!(choice.covered.len(), 3);
    }

    #[test]
    fn ties_prefer_tighter_set() {
        // {0,1} and {1,2} both fit; {0,1} is tighter.
        let choice = best_disk(&ues(&[(0.0, 0.0), (0.5, 0.0), (2.3, 0.0)]), 1.0);
        assert_eq!(choice.covered, vec![0, 1]);
    }
}

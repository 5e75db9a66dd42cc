//! Two-means clustering of scalar features with seeded restarts.

use rand::Rng;

use crate::seeds;

pub const RESTARTS: usize = 10;
pub const MAX_ITERATIONS: usize = 100;
pub const CONVERGENCE: f64 = 1e-9;
const RESTART_SEED: u64 = 0x6b6d_6561_6e73;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoMeans {
    /// `false` = low cluster, `true` = high cluster, per input value.
    pub high: Vec<bool>,
    /// Centroids, low first.
    pub centroids: [f64; 2],
    pub inertia: f64,
    /// All values were identical; everything is in the low cluster.
    pub degenerate: bool,
}

fn assign(values: &[f64], c: [f64; 2]) -> Vec<bool> {
    // Equidistant values go to the low cluster.
    values.iter().map(|&v| (v - c[1]).abs() < (v - c[0]).abs()).collect()
}

fn lloyd(values: &[f64], mut c: [f64; 2]) -> ([f64; 2], f64) {
    for _ in 0..MAX_ITERATIONS {
        let mut sum = [0.0; 2];
        let mut count = [0usize; 2];
        for &v in values {
            let k = usize::from((v - c[1]).abs() < (v - c[0]).abs());
            sum[k] += v;
            count[k] += 1;
        }
        let mut next = c;
        for k in 0..2 {
            if count[k] > 0 {
                next[k] = sum[k] / count[k] as f64;
            }
        }
        let shift = (next[0] - c[0]).abs().max((next[1] - c[1]).abs());
        c = next;
        if shift <= CONVERGENCE {
            break;
        }
    }
    if c[0] > c[1] {
        c.swap(0, 1);
    }
    let inertia = values
        .iter()
        .map(|&v| ((v - c[0]).powi(2)).min((v - c[1]).powi(2)))
        .sum();
    (c, inertia)
}

/// Clusters `values` into two groups.
///
/// Restarts are initialised from the sorted values, so the result does not
/// depend on input order. Restart 0 starts from the extremes; the others from
/// seeded random pairs of distinct values. The lowest inertia wins, ties to
/// the earlier restart.
pub fn two_means(values: &[f64]) -> TwoMeans {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (Some(&min), Some(&max)) = (sorted.first(), sorted.last()) else {
        return TwoMeans { high: Vec::new(), centroids: [0.0; 2], inertia: 0.0, degenerate: true };
    };
    if min == max {
        return TwoMeans { high: vec![false; values.len()], centroids: [min, min], inertia: 0.0, degenerate: true };
    }

    let mut best: Option<([f64; 2], f64)> = None;
    let mut rng = seeds::rng(RESTART_SEED);
    for restart in 0..RESTARTS {
        let init = if restart == 0 {
            [min, max]
        } else {
            loop {
                let a = sorted[rng.random_range(0..sorted.len())];
                let b = sorted[rng.random_range(0..sorted.len())];
                if a != b {
                    break [a.min(b), a.max(b)];
                }
            }
        };
        let (c, inertia) = lloyd(&sorted, init);
        if best.is_none_or(|(_, b)| inertia < b) {
            best = Some((c, inertia));
        }
    }
    let (centroids, inertia) = best.expect("at least one restart");
    TwoMeans { high: assign(values, centroids), centroids, inertia, degenerate: false }
}

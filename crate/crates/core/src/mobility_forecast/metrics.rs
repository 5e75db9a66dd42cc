use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmseReport {
    pub n: usize,
    pub value: f64,
}

/// `sqrt((1/n)·Σ(truth_i − pred_i)²)`.
pub fn rmse(truth: &[f64], pred: &[f64]) -> Result<RmseReport> {
    if truth.len() != pred.len() {
        return Err(Error::Domain(format!("rmse length mismatch: {} vs {}", truth.len(), pred.len())));
    }
    if truth.is_empty() {
        return Err(Error::Domain("rmse of empty sequences".into()));
    }
    let sum: f64 = truth.iter().zip(pred).map(|(t, p)| (t - p) * (t - p)).sum();
    Ok(RmseReport { n: truth.len(), value: (sum / truth.len() as f64).sqrt() })
}

/// RMSE over 2-D points, with the Euclidean distance as the per-point error.
pub fn rmse_points(truth: &[Point2], pred: &[Point2]) -> Result<RmseReport> {
    if truth.len() != pred.len() {
        return Err(Error::Domain(format!("rmse length mismatch: {} vs {}", truth.len(), pred.len())));
    }
    let errors: Vec<f64> = truth.iter().zip(pred).map(|(t, p)| t.distance(p)).collect();
    rmse(&errors, &vec![0.0; errors.len()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_cases() {
        assert_eq!(rmse(&[1.0, 2.0], &[1.0, 2.0]).unwrap().value, 0.0);
        let r = rmse(&[3.0, 4.0], &[0.0, 0.0]).unwrap();
        assert!((r.value - 3.5355339059327378).abs() < 1e-15);
        assert_eq!(r.n, 2);
    }

    #[test]
    fn errors() {
        assert!(rmse(&[], &[]).is_err());
        assert!(rmse(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn points_use_euclidean_error() {
        let r = rmse_points(&[Point2::new(3.0, 4.0)], &[Point2::new(0.0, 0.0)]).unwrap();
        assert!((r.value - 5.0).abs() < 1e-15);
    }
}

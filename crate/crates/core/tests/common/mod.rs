//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

/// Circle through up to three points: `(cx, cy, radius)`.
type Circle = (f64, f64, f64);

const INSIDE_TOL: f64 = 1e-9;

fn diameter_circle(a: (f64, f64), b: (f64, f64)) -> Circle {
    let (cx, cy) = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    (cx, cy, ((a.0 - cx).powi(2) + (a.1 - cy).powi(2)).sqrt())
}

fn circumcircle(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<Circle> {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    if d.abs() < 1e-12 {
        return None;
    }
    let (a2, b2, c2) = (a.0 * a.0 + a.1 * a.1, b.0 * b.0 + b.1 * b.1, c.0 * c.0 + c.1 * c.1);
    let ux = (a2 * (b.1 - c.1) + b2 * (c.1 - a.1) + c2 * (a.1 - b.1)) / d;
    let uy = (a2 * (c.0 - b.0) + b2 * (a.0 - c.0) + c2 * (b.0 - a.0)) / d;
    Some((ux, uy, ((a.0 - ux).powi(2) + (a.1 - uy).powi(2)).sqrt()))
}

/// Every circle defined by one, two (as diameter) or three points.
fn candidate_circles(points: &[(f64, f64)]) -> Vec<Circle> {
    let n = points.len();
    let mut out: Vec<Circle> = points.iter().map(|p| (p.0, p.1, 0.0)).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(diameter_circle(points[i], points[j]));
            for k in j + 1..n {
                if let Some(c) = circumcircle(points[i], points[j], points[k]) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn count_inside(points: &[(f64, f64)], c: &Circle, radius: f64) -> usize {
    points
        .iter()
        .filter(|p| ((p.0 - c.0).powi(2) + (p.1 - c.1).powi(2)).sqrt() <= radius + INSIDE_TOL)
        .count()
}

/// Smallest enclosing circle radius by exhaustive search over candidate
/// circles.
pub fn brute_mec_radius(points: &[(f64, f64)]) -> f64 {
    candidate_circles(points)
        .iter()
        .filter(|c| count_inside(points, c, c.2) == points.len())
        .map(|c| c.2)
        .fold(f64::INFINITY, f64::min)
}

/// Largest number of points a disk of radius `r` can hold, counting only
/// subsets whose enclosing circle has radius at most `r - margin`.
///
/// A set fits in a radius-`r` disk iff its smallest enclosing circle has
/// radius ≤ r, and that circle is one of the candidates, so with
/// `margin = 0` this is exact.
pub fn combinatorial_max_cover(points: &[(f64, f64)], r: f64, margin: f64) -> usize {
    candidate_circles(points)
        .iter()
        .filter(|c| c.2 <= r - margin + INSIDE_TOL)
        .map(|c| count_inside(points, c, c.2))
        .max()
        .unwrap_or(0)
}

/// Largest number of points within `r` of any grid center with spacing
/// `step` over the points' bounding box grown by `r`.
pub fn grid_max_cover(points: &[(f64, f64)], r: f64, step: f64) -> usize {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.0);
        y0 = y0.min(p.1);
        x1 = x1.max(p.0);
        y1 = y1.max(p.1);
    }
    let nx = ((x1 - x0 + 2.0 * r) / step).ceil() as usize + 1;
    let ny = ((y1 - y0 + 2.0 * r) / step).ceil() as usize + 1;
    let r2 = r * r;
    let mut best = 0;
    for ix in 0..nx {
        let cx = x0 - r + ix as f64 * step;
        for iy in 0..ny {
            let cy = y0 - r + iy as f64 * step;
            let k = points.iter().filter(|p| (p.0 - cx).powi(2) + (p.1 - cy).powi(2) <= r2).count();
            best = best.max(k);
        }
    }
    best
}

/// Solves `A·X = B` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            for k in 0..m {
                b[row][k] -= f * b[col][k];
            }
        }
    }
    let mut x = vec![vec![0.0; m]; n];
    for row in (0..n).rev() {
        for k in 0..m {
            let s: f64 = (row + 1..n).map(|j| a[row][j] * x[j][k]).sum();
            x[row][k] = (b[row][k] - s) / a[row][row];
        }
    }
    x
}

/// Rise, then at most one more cell at the peak value, then fall. Zeros after
/// the fall are the end of coverage and may repeat. Steps smaller than `tol`
/// count as flat. Both a rise and a fall are required.
pub fn is_unimodal(values: &[f64], tol: f64) -> bool {
    let n = values.len();
    if n < 3 {
        return false;
    }
    let peak = (0..n).fold(0, |best, i| if values[i] > values[best] + tol { i } else { best });
    if peak == 0 {
        return false;
    }
    if values[..=peak].windows(2).any(|w| w[1] <= w[0] + tol) {
        return false;
    }
    let mut k = peak;
    if k + 1 < n && (values[k + 1] - values[k]).abs() <= tol {
        k += 1;
    }
    if k + 1 >= n {
        return false;
    }
    values[k..].windows(2).all(|w| w[1] < w[0] - tol || (w[0] <= tol && w[1] <= tol))
}

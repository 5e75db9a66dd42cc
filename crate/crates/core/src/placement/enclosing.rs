//! Smallest enclosing circle (Welzl's algorithm, iterative form).

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::seeds;
use crate::{Error, Result};

// Fixed shuffle seed: the expected-linear bound needs a random order, the
// result must not depend on the run seed.
const SHUFFLE_SEED: u64 = 0x5ec0_c1e5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    fn contains(&self, p: &Point2) -> bool {
        let slack = 1e-12 * self.radius.max(1.0);
        self.center.distance(p) <= self.radius + slack
    }

    fn diameter(a: Point2, b: Point2) -> Circle {
        let center = a.midpoint(&b);
        Circle { center, radius: center.distance(&a).max(center.distance(&b)) }
    }

    /// `None` for (near-)collinear points.
    fn circumscribed(a: Point2, b: Point2, c: Point2) -> Option<Circle> {
        // Translate to the bounding-box center for conditioning.
        let ox = (a.x.min(b.x).min(c.x) + a.x.max(b.x).max(c.x)) / 2.0;
        let oy = (a.y.min(b.y).min(c.y) + a.y.max(b.y).max(c.y)) / 2.0;
        let (ax, ay) = (a.x - ox, a.y - oy);
        let (bx, by) = (b.x - ox, b.y - oy);
        let (cx, cy) = (c.x - ox, c.y - oy);
        let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        if d == 0.0 {
            return None;
        }
        let a2 = ax * ax + ay * ay;
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let x = ox + (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
        let y = oy + (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
        let center = Point2::new(x, y);
        let radius = center.distance(&a).max(center.distance(&b)).max(center.distance(&c));
        radius.is_finite().then_some(Circle { center, radius })
    }
}

/// Smallest circle containing every point.
///
/// The returned radius is the largest center-to-point distance, so every input
/// point lies inside the circle exactly as measured.
pub fn min_enclosing_circle(points: &[Point2]) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::Domain("enclosing circle of an empty point set".into()));
    }
    let mut shuffled = points.to_vec();
    shuffled.shuffle(&mut seeds::rng(SHUFFLE_SEED));

    let mut circle = Circle { center: shuffled[0], radius: 0.0 };
    for i in 1..shuffled.len() {
        if !circle.contains(&shuffled[i]) {
            circle = with_one_boundary(&shuffled[..i], shuffled[i]);
        }
    }
    let radius = points.iter().map(|p| circle.center.distance(p)).fold(0.0, f64::max);
    Ok(Circle { center: circle.center, radius })
}

fn with_one_boundary(points: &[Point2], p: Point2) -> Circle {
    let mut circle = Circle { center: p, radius: 0.0 };
    for i in 0..points.len() {
        let q = points[i];
        if !circle.contains(&q) {
            circle = if circle.radius == 0.0 {
                Circle::diameter(p, q)
            } else {
                with_two_boundary(&points[..i], p, q)
            };
        }
    }
    circle
}

fn with_two_boundary(points: &[Point2], p: Point2, q: Point2) -> Circle {
    let mut circle = Circle::diameter(p, q);
    for &r in points {
        if circle.contains(&r) {
            continue;
        }
        circle = match Circle::circumscribed(p, q, r) {
            Some(c) => c,
            None => {
                // Collinear: the outermost pair spans the circle.
                let candidates = [Circle::diameter(p, r), Circle::diameter(q, r), Circle::diameter(p, q)];
                candidates.into_iter().fold(circle, |best, c| if c.radius > best.radius { c } else { best })
            }
        };
    }
    circle
}

//! One-dimensional maximisation on a bracket: golden-section refinement and
//! the coarse-grid-then-golden hybrid used by the altitude searches.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximiser of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `tol`. Returns `(x, f(x))` for the best point
/// evaluated, so the result is never worse than either probe.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fd > fc { (d, fd) } else { (c, fc) };

    while b - a > tol {
        // Ties shrink towards the lower end.
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc >= best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// Uniform grid of `n` points on `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Coarse grid scan followed by golden-section refinement inside the two grid
/// cells adjacent to the best grid point.
///
/// `equivalence` widens the grid tie-break: the lowest grid point whose value
/// is within `equivalence` of the grid maximum seeds the refinement. The
/// returned point is the refined one only if it strictly improves on that grid
/// point.
pub fn grid_then_golden(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
    equivalence: f64,
) -> (f64, f64) {
    let xs = linspace(lo, hi, grid.max(2));
    let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let grid_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = values
        .iter()
        .position(|&v| v >= grid_max - equivalence)
        .unwrap_or(0);

    let left = xs[k.saturating_sub(1)];
    let right = xs[(k + 1).min(xs.len() - 1)];
    let (x_ref, f_ref) = golden_section_max(&f, left, right, tol);
    if f_ref > values[k] {
        (x_ref, f_ref)
    } else {
        (xs[k], values[k])
    }
}

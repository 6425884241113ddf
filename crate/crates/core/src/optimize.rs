//! One-dimensional minimisation helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Returns the best point visited and its value. Stops once the bracket is
/// narrower than `tol` or after 200 iterations.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Index of the first strict minimum of `values`; later values must be
/// strictly smaller to win, so ties go to the lowest index. NaN is skipped.
pub fn first_argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some(b) if values[b] <= v => {}
            _ => best = Some(i),
        }
    }
    best
}

/// `points` log-spaced values covering `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| match i {
            0 => lo,
            _ if i == points - 1 => hi,
            _ => (a + (b - a) * i as f64 / last).exp(),
        })
        .collect()
}

//! The sinc density estimator, its derivatives and its mode.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::ecf::Sample;
use crate::optimize::golden_section_min;
use crate::{Error, Result};

/// Highest derivative order supported by [`sinc_derivative_eval`].
pub const MAX_DERIVATIVE_ORDER: u32 = 12;

/// `f_n^{(r)}(·; h)` for a fixed sample.
#[derive(Debug, Clone, Copy)]
pub struct SincEstimate<'a> {
    sample: &'a Sample,
    h: f64,
    r: u32,
}

impl<'a> SincEstimate<'a> {
    pub fn new(sample: &'a Sample, h: f64, r: u32) -> Result<Self> {
        check_h(h)?;
        check_order(r)?;
        Ok(SincEstimate { sample, h, r })
    }

    pub fn sample(&self) -> &'a Sample {
        self.sample
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn eval(&self, x: f64) -> f64 {
        let sum: f64 = self
            .sample
            .values()
            .iter()
            .map(|&xj| sinc_fn_derivative(self.r, (x - xj) / self.h))
            .sum();
        sum / (PI * self.sample.len() as f64 * self.h.powi(self.r as i32 + 1))
    }
}

/// Estimate values on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    pub h: f64,
    pub corrected: bool,
}

fn check_h(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("bandwidth h must be positive, got {h}")))
    }
}

fn check_order(r: u32) -> Result<()> {
    if r > MAX_DERIVATIVE_ORDER {
        Err(Error::Unsupported(format!(
            "derivative order {r} exceeds the supported maximum {MAX_DERIVATIVE_ORDER}"
        )))
    } else {
        Ok(())
    }
}

/// `d^r/du^r (sin u / u)`.
///
/// Uses the Taylor series near the origin, where the Leibniz expansion
/// cancels catastrophically, and the Leibniz expansion elsewhere.
pub fn sinc_fn_derivative(r: u32, u: f64) -> f64 {
    if u.abs() < 1.0 + 0.5 * r as f64 {
        sinc_series(r, u)
    } else {
        sinc_leibniz(r, u)
    }
}

fn sinc_series(r: u32, u: f64) -> f64 {
    let r = r as i64;
    let j0 = (r + 1) / 2;
    let mut e = 2 * j0 - r;
    // p = u^e / e!
    let mut p = if e == 0 { 1.0 } else { u };
    let u2 = u * u;
    let mut sum = 0.0;
    for j in (j0..).take(200) {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * p / (2 * j + 1) as f64;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(1e-300) && e as f64 > u.abs() {
            break;
        }
        p *= u2 / ((e + 1) * (e + 2)) as f64;
        e += 2;
    }
    sum
}

fn sinc_leibniz(r: u32, u: f64) -> f64 {
    let (s, c) = u.sin_cos();
    let cycle = [s, c, -s, -c];
    let inv = 1.0 / u;
    let mut binom = 1.0;
    // d^k u^{-1} = (-1)^k k! u^{-k-1}
    let mut inv_deriv = inv;
    let mut sum = 0.0;
    for k in 0..=r {
        sum += binom * cycle[((r - k) % 4) as usize] * inv_deriv;
        binom = binom * (r - k) as f64 / (k + 1) as f64;
        inv_deriv *= -((k + 1) as f64) * inv;
    }
    sum
}

/// `f_n(x; h) = (1/(πn)) Σ sin((x - X_j)/h) / (x - X_j)`.
pub fn sinc_eval(sample: &Sample, h: f64, x: f64) -> Result<f64> {
    Ok(SincEstimate::new(sample, h, 0)?.eval(x))
}

/// The `r`-th derivative of [`sinc_eval`] in `x`.
pub fn sinc_derivative_eval(sample: &Sample, h: f64, r: u32, x: f64) -> Result<f64> {
    Ok(SincEstimate::new(sample, h, r)?.eval(x))
}

/// Evaluates the estimate at `points` equally spaced points of `[x_lo, x_hi]`.
pub fn evaluate_on_grid(estimate: &SincEstimate<'_>, x_lo: f64, x_hi: f64, points: usize) -> Result<DensityGrid> {
    if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
        return Err(Error::domain(format!("grid range [{x_lo}, {x_hi}] is empty or inverted")));
    }
    if points < 2 {
        return Err(Error::domain(format!("grid needs at least 2 points, got {points}")));
    }
    let step = (x_hi - x_lo) / (points - 1) as f64;
    let x_values: Vec<f64> = (0..points)
        .map(|i| if i == points - 1 { x_hi } else { x_lo + step * i as f64 })
        .collect();
    let y_values = x_values.par_iter().map(|&x| estimate.eval(x)).collect();
    Ok(DensityGrid {
        x_values,
        y_values,
        h: estimate.h(),
        corrected: false,
    })
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Clips negative values to zero and rescales so that the trapezoid
/// integral over the grid is one.
pub fn correct_to_density(grid: &DensityGrid) -> Result<DensityGrid> {
    if grid.x_values.len() < 2 || grid.x_values.len() != grid.y_values.len() {
        return Err(Error::domain("grid needs at least 2 points and matching lengths"));
    }
    let clipped: Vec<f64> = grid.y_values.iter().map(|&y| y.max(0.0)).collect();
    let mass = trapezoid(&grid.x_values, &clipped);
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Degenerate("estimate has no positive mass on the grid".into()));
    }
    Ok(DensityGrid {
        x_values: grid.x_values.clone(),
        y_values: clipped.into_iter().map(|y| y / mass).collect(),
        h: grid.h,
        corrected: true,
    })
}

/// `argmax_x f_n(x; h)`: a scan of `[min X - 3h, max X + 3h]` at spacing
/// `h/8` followed by golden-section refinement around the best scan point.
/// Ties (relative 1e-12) go to the smallest `x`.
pub fn estimate_mode(sample: &Sample, h: f64) -> Result<f64> {
    let est = SincEstimate::new(sample, h, 0)?;
    let lo = sample.min() - 3.0 * h;
    let hi = sample.max() + 3.0 * h;
    let step = h / 8.0;
    let count = ((hi - lo) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=count).map(|i| (lo + step * i as f64).min(hi)).collect();
    let ys: Vec<f64> = xs.par_iter().map(|&x| est.eval(x)).collect();

    let mut best = 0;
    for i in 1..ys.len() {
        if ys[i] > ys[best] + 1e-12 * ys[best].abs() {
            best = i;
        }
    }
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(xs.len() - 1)];
    let tol = 1e-8 * (hi - lo);
    let (x, neg) = golden_section_min(|x| -est.eval(x), a, b, tol);
    if -neg > ys[best] {
        Ok(x)
    } else {
        Ok(xs[best])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecf::ecf_eval;
    use crate::quadrature::integrate_panels;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn sample(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    /// `(1/2π)∫_{-1/h}^{1/h} (-it)^r φ_n(t) e^{-itx} dt`.
    fn spectral(s: &Sample, h: f64, r: u32, x: f64) -> f64 {
        let d = 1.0 / h;
        let f = |t: f64| {
            let z = Complex64::new(0.0, -t).powu(r) * ecf_eval(s, t) * Complex64::new(0.0, -t * x).exp();
            z.re
        };
        integrate_panels(f, -d, d, 0.05, 1e-13).value / (2.0 * PI)
    }

    #[test]
    fn eval_examples() {
        let zero = sample(&[0.0]);
        assert!((sinc_eval(&zero, 1.0, 0.0).unwrap() - 1.0 / PI).abs() < 1e-16);
        assert!(sinc_eval(&zero, 1.0, PI).unwrap().abs() < 1e-16);
        let pair = sample(&[-1.0, 1.0]);
        let direct = ((2.0f64).sin() / 1.0 + (-2.0f64).sin() / -1.0) / (2.0 * PI);
        assert!((sinc_eval(&pair, 0.5, 0.0).unwrap() - direct).abs() < 1e-15);
        assert!(matches!(sinc_eval(&pair, 0.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_examples() {
        let zero = sample(&[0.0]);
        assert_eq!(sinc_derivative_eval(&zero, 1.0, 1, 0.0).unwrap(), 0.0);
        let d2 = sinc_derivative_eval(&zero, 1.0, 2, 0.0).unwrap();
        assert!((d2 + 1.0 / (3.0 * PI)).abs() < 1e-15);
        assert!((d2 - spectral(&zero, 1.0, 2, 0.0)).abs() < 1e-12);
        let s = sample(&[0.2, -1.4, 3.0]);
        for &x in &[-2.0, 0.0, 0.2, 1.7] {
            assert_eq!(sinc_derivative_eval(&s, 0.7, 0, x).unwrap(), sinc_eval(&s, 0.7, x).unwrap());
        }
        assert!(matches!(sinc_derivative_eval(&s, 1.0, 13, 0.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn kernel_branches_agree_at_switch() {
        for r in 0..=MAX_DERIVATIVE_ORDER {
            let u0 = 1.0 + 0.5 * r as f64;
            for &u in &[u0 * (1.0 - 1e-9), u0 * (1.0 + 1e-9), 0.8 * u0, 1.3 * u0] {
                let a = sinc_series(r, u);
                let b = sinc_leibniz(r, u);
                assert!((a - b).abs() < 1e-11, "r={r} u={u}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn kernel_matches_finite_differences() {
        for r in 1..=6u32 {
            for &u in &[0.0, 1e-7, 0.3, 2.5, 7.0, -4.2] {
                let eps = 1e-5;
                let fd = (sinc_fn_derivative(r - 1, u + eps) - sinc_fn_derivative(r - 1, u - eps)) / (2.0 * eps);
                assert!((sinc_fn_derivative(r, u) - fd).abs() < 1e-8, "r={r} u={u}");
            }
        }
    }

    #[test]
    fn spectral_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let n = rng.random_range(1..=50);
            let s = Sample::new((0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).unwrap();
            for &h in &[0.3, 1.0] {
                for r in 0..=3 {
                    for _ in 0..5 {
                        let x = rng.random_range(-4.0..4.0);
                        let a = sinc_derivative_eval(&s, h, r, x).unwrap();
                        let b = spectral(&s, h, r, x);
                        assert!((a - b).abs() < 1e-8, "h={h} r={r} x={x}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn grid_examples() {
        let zero = sample(&[0.0]);
        let est = SincEstimate::new(&zero, 1.0, 0).unwrap();
        let g = evaluate_on_grid(&est, -PI, PI, 3).unwrap();
        assert_eq!(g.x_values, vec![-PI, 0.0, PI]);
        assert!(g.y_values[0].abs() < 1e-16 && g.y_values[2].abs() < 1e-16);
        assert!((g.y_values[1] - 1.0 / PI).abs() < 1e-16);
        assert!(!g.corrected);
        assert_eq!(evaluate_on_grid(&est, 0.0, 1.0, 2).unwrap().x_values, vec![0.0, 1.0]);
        assert_eq!(evaluate_on_grid(&est, 0.0, 1.0, 17).unwrap().y_values.len(), 17);
        assert!(evaluate_on_grid(&est, 1.0, 0.0, 5).is_err());
    }

    #[test]
    fn correction_examples() {
        let g = DensityGrid {
            x_values: vec![0.0, 1.0],
            y_values: vec![1.0, 1.0],
            h: 1.0,
            corrected: false,
        };
        let c = correct_to_density(&g).unwrap();
        assert!(c.y_values.iter().all(|y| (y - 1.0).abs() < 1e-12));
        assert!(c.corrected);

        let g = DensityGrid {
            y_values: vec![-1.0, 1.0],
            ..g
        };
        assert_eq!(correct_to_density(&g).unwrap().y_values, vec![0.0, 2.0]);

        let g = DensityGrid {
            y_values: vec![-1.0, 0.0],
            ..g
        };
        assert!(matches!(correct_to_density(&g), Err(Error::Degenerate(_))));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = Sample::new((0..200).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).unwrap();
        let est = SincEstimate::new(&s, 0.4, 0).unwrap();
        let c = correct_to_density(&evaluate_on_grid(&est, -5.0, 5.0, 1001).unwrap()).unwrap();
        assert!(c.y_values.iter().all(|&y| y >= 0.0));
        assert!((trapezoid(&c.x_values, &c.y_values) - 1.0).abs() < 1e-9);
    }

    fn dense_argmax(s: &Sample, h: f64, lo: f64, hi: f64) -> f64 {
        let m = 200_001;
        let mut best = (lo, f64::NEG_INFINITY);
        for i in 0..m {
            let x = lo + (hi - lo) * i as f64 / (m - 1) as f64;
            let y = sinc_eval(s, h, x).unwrap();
            if y > best.1 {
                best = (x, y);
            }
        }
        best.0
    }

    #[test]
    fn mode_examples() {
        for &h in &[0.1, 0.5, 3.0] {
            assert!(estimate_mode(&sample(&[0.0]), h).unwrap().abs() < 1e-9);
        }
        let pair = sample(&[-1.0, 1.0]);
        let m = estimate_mode(&pair, 2.0).unwrap();
        assert!(m.abs() < 1e-6);
        assert!((m - dense_argmax(&pair, 2.0, -7.0, 7.0)).abs() < 1e-4);

        let m = estimate_mode(&pair, 0.1).unwrap();
        let oracle = dense_argmax(&pair, 0.1, -1.3, 0.0);
        assert!(m < 0.0 && (m + 1.0).abs() < 0.01, "{m}");
        assert!((m - oracle).abs() < 1e-4, "{m} vs {oracle}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn values() -> impl Strategy<Value = Vec<f64>> {
            prop::collection::vec(-4.0f64..4.0, 1..30)
        }

        proptest! {
            #[test]
            fn bounded_by_peak(v in values(), h in 0.05f64..3.0, x in -10.0f64..10.0) {
                let s = Sample::new(v).unwrap();
                prop_assert!(sinc_eval(&s, h, x).unwrap().abs() <= 1.0 / (PI * h) * (1.0 + 1e-12));
            }

            #[test]
            fn location_equivariant(v in values(), h in 0.1f64..2.0, x in -5.0f64..5.0, c in -3.0f64..3.0, r in 0u32..4) {
                let s = Sample::new(v.clone()).unwrap();
                let shifted = Sample::new(v.iter().map(|xj| xj + c).collect()).unwrap();
                let a = sinc_derivative_eval(&s, h, r, x).unwrap();
                let b = sinc_derivative_eval(&shifted, h, r, x + c).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()) / h.powi(r as i32 + 1) * 10.0);
            }

            #[test]
            fn scale_equivariant(v in values(), h in 0.1f64..2.0, x in -5.0f64..5.0, lambda in 0.25f64..4.0, r in 0u32..4) {
                let s = Sample::new(v.clone()).unwrap();
                let scaled = Sample::new(v.iter().map(|xj| lambda * xj).collect()).unwrap();
                let a = sinc_derivative_eval(&s, h, r, x).unwrap();
                let b = sinc_derivative_eval(&scaled, lambda * h, r, lambda * x).unwrap();
                let expected = a / lambda.powi(r as i32 + 1);
                prop_assert!((b - expected).abs() <= 1e-10 * (1.0 + a.abs()) / (h * lambda).powi(r as i32 + 1));
            }

            #[test]
            fn mode_beats_scan(v in prop::collection::vec(-3.0f64..3.0, 1..15), h in 0.2f64..2.0) {
                let s = Sample::new(v).unwrap();
                let m = estimate_mode(&s, h).unwrap();
                let fm = sinc_eval(&s, h, m).unwrap();
                let lo = s.min() - 3.0 * h;
                let hi = s.max() + 3.0 * h;
                let count = ((hi - lo) / (h / 8.0)).ceil() as usize;
                for i in 0..=count {
                    let x = (lo + h / 8.0 * i as f64).min(hi);
                    let y = sinc_eval(&s, h, x).unwrap();
                    prop_assert!(fm >= y - 1e-12 * y.abs() - 1e-15);
                }
            }
        }
    }
}

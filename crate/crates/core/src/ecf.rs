//! Samples, the empirical characteristic function and its modulus
//! down-crossings.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::{Error, Result};

const BISECTION_STEPS: usize = 50;

/// An immutable collection of finite observations with cached summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    mean: f64,
    std_dev: f64,
    min: f64,
    max: f64,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Degenerate("sample is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Degenerate(format!(
                "sample value #{} is not finite ({})",
                i + 1,
                values[i]
            )));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Sample {
            values,
            mean,
            std_dev: var.sqrt(),
            min,
            max,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Standard deviation with divisor `n`.
    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Largest distance of an observation from the sample mean.
    pub fn max_abs_deviation(&self) -> f64 {
        (self.max - self.mean).max(self.mean - self.min)
    }
}

/// `|φ_n|` tabulated on `[0, t_max]`.
#[derive(Debug, Clone)]
pub struct EcfGrid<'a> {
    pub sample: &'a Sample,
    pub t_values: Vec<f64>,
    pub modulus: Vec<f64>,
}

impl EcfGrid<'_> {
    pub fn n(&self) -> usize {
        self.sample.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownCrossing {
    pub delta: f64,
    pub bracket: (f64, f64),
}

/// `φ_n(t) = (1/n) Σ exp(i t X_j)`.
pub fn ecf_eval(sample: &Sample, t: f64) -> Complex64 {
    let a = t.abs();
    let (mut re, mut im) = (0.0, 0.0);
    for &x in sample.values() {
        let (s, c) = (a * x).sin_cos();
        re += c;
        im += s;
    }
    let n = sample.len() as f64;
    let z = Complex64::new(re / n, im / n);
    if t < 0.0 {
        z.conj()
    } else {
        z
    }
}

/// `|φ_n(t)|` on `0, step, 2·step, …` up to and including `t_max`.
pub fn ecf_modulus_grid(sample: &Sample, t_max: f64, step: f64) -> Result<EcfGrid<'_>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::domain(format!("grid step must be positive, got {step}")));
    }
    if !(t_max.is_finite() && t_max >= step) {
        return Err(Error::domain(format!("t_max = {t_max} must be at least the step {step}")));
    }
    let t_values = uniform_points(t_max, step);
    let modulus = t_values.par_iter().map(|&t| ecf_eval(sample, t).norm()).collect();
    Ok(EcfGrid {
        sample,
        t_values,
        modulus,
    })
}

/// The default ECF grid spacing: at least eight points per period of the
/// fastest oscillation `exp(i t (X_j - mean))`, and never coarser than 0.01.
pub fn default_step(sample: &Sample) -> f64 {
    let spread = sample.max_abs_deviation();
    if spread > 0.0 {
        (std::f64::consts::PI / (8.0 * spread)).min(0.01)
    } else {
        0.01
    }
}

/// Every down-crossing of `|φ_n|` through `level` on the grid, refined by
/// bisection and listed in increasing order.
pub fn find_down_crossings(grid: &EcfGrid<'_>, level: f64) -> Result<Vec<DownCrossing>> {
    let modulus = |t: f64| ecf_eval(grid.sample, t).norm();
    down_crossings(&grid.t_values, &grid.modulus, level, modulus)
}

/// Down-crossings of a tabulated function through `level`, refined by
/// bisection on `f`.
pub(crate) fn down_crossings<F>(t: &[f64], values: &[f64], level: f64, f: F) -> Result<Vec<DownCrossing>>
where
    F: Fn(f64) -> f64,
{
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("level must lie in (0, 1), got {level}")));
    }
    let mut out = Vec::new();
    for i in 0..values.len().saturating_sub(1) {
        if values[i] > level && values[i + 1] <= level {
            let (mut lo, mut hi) = (t[i], t[i + 1]);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if f(mid) > level {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(DownCrossing {
                delta: 0.5 * (lo + hi),
                bracket: (t[i], t[i + 1]),
            });
        }
    }
    Ok(out)
}

pub(crate) fn uniform_points(t_max: f64, step: f64) -> Vec<f64> {
    let count = (t_max / step).floor() as usize;
    let mut t: Vec<f64> = (0..=count).map(|i| i as f64 * step).collect();
    if t_max - t[count] > 1e-12 * t_max {
        t.push(t_max);
    } else {
        t[count] = t_max;
    }
    t
}

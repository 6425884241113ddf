//! Sinc versus trapezoidal superkernel on a power-tail spectrum
//! `|φ(t)|² = a/|t|^m`, `|t| > c`, where both MISEs have closed forms.

use std::f64::consts::PI;

use super::{check_args, MiseBreakdown};
use crate::charfn::{head_energy, CharModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperkernelComparison {
    pub sinc: MiseBreakdown,
    pub trapezoid: MiseBreakdown,
    /// `trapezoid.variance - sinc.variance`, evaluated without subtracting
    /// the two (nearly equal) variances.
    pub variance_gap: f64,
}

impl SuperkernelComparison {
    /// `sinc.bias_sq / trapezoid.bias_sq`; independent of `h`.
    pub fn bias_ratio(&self) -> f64 {
        self.sinc.bias_sq / self.trapezoid.bias_sq
    }
}

/// `∫_1^2 s^{-m} (s - 1)² ds + ∫_2^∞ s^{-m} ds`.
fn trapezoid_bias_factor(m: f64) -> f64 {
    1.0 / (m - 1.0) - 2.0 * (1.0 - 2f64.powf(2.0 - m)) / (m - 2.0) + (1.0 - 2f64.powf(3.0 - m)) / (m - 3.0)
}

/// `∫_1^2 s^{-m} (2 - s)² ds`.
fn trapezoid_variance_factor(m: f64) -> f64 {
    4.0 * (1.0 - 2f64.powf(1.0 - m)) / (m - 1.0) - 4.0 * (1.0 - 2f64.powf(2.0 - m)) / (m - 2.0)
        + (1.0 - 2f64.powf(3.0 - m)) / (m - 3.0)
}

/// Comparison on the model `|φ(t)|² = 1/|t|^m` for `|t| > 1` (unit head).
pub fn superkernel_comparison(m: f64, delta: f64, h: f64, n: u64) -> Result<SuperkernelComparison> {
    if !(m.is_finite() && m >= 4.0) {
        return Err(Error::domain(format!("tail exponent m must be at least 4, got {m}")));
    }
    superkernel_comparison_for(&CharModel::power_tail(1.0, 1.0, m)?, delta, h, n)
}

/// Comparison on an arbitrary power-tail model. Requires `h < Δ/c`, so that
/// both spectral cutoffs lie in the power-law part of the spectrum.
pub fn superkernel_comparison_for(model: &CharModel, delta: f64, h: f64, n: u64) -> Result<SuperkernelComparison> {
    check_args(n, h)?;
    let CharModel::PowerTail { a, c, m } = model.validated()? else {
        return Err(Error::Unsupported("superkernel closed forms need a power-tail model".into()));
    };
    if m < 4.0 {
        return Err(Error::domain(format!("tail exponent m must be at least 4, got {m}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("Δ must lie in (0, 1), got {delta}")));
    }
    if h >= delta / c {
        return Err(Error::OutOfValidity(format!(
            "closed forms need h < Δ/c = {}, got h = {h}",
            delta / c
        )));
    }
    let nf = n as f64;
    let scale = a * (h / delta).powf(m - 1.0);
    let shared = PI * head_energy(model, delta / h)?.value;

    let sinc_bias = a * h.powf(m - 1.0) / (PI * (m - 1.0));
    let trap_bias = scale * trapezoid_bias_factor(m) / PI;

    let sinc_middle = scale * (1.0 - delta.powf(m - 1.0)) / (m - 1.0);
    let trap_middle = scale * trapezoid_variance_factor(m);
    let sinc_var = (1.0 / h - shared - sinc_middle) / (PI * nf);
    let trap_var = (4.0 * delta / (3.0 * h) - shared - trap_middle) / (PI * nf);
    let gap = ((4.0 * delta / 3.0 - 1.0) / h - (trap_middle - sinc_middle)) / (PI * nf);

    Ok(SuperkernelComparison {
        sinc: MiseBreakdown::new(sinc_bias, sinc_var, h, n, 0),
        trapezoid: MiseBreakdown::new(trap_bias, trap_var, h, n, 0),
        variance_gap: gap,
    })
}

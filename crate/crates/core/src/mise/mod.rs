//! Exact mean integrated squared error of the sinc estimator and of
//! conventional kernel estimators, plus bandwidth optimisation.
//!
//! Every formula works in the frequency domain: for a kernel with Fourier
//! transform `ψ`, the integrated squared bias is
//! `(1/π)∫_0^∞ |φ(t)|² (1 - ψ(ht))² dt` and the integrated variance is
//! `(1/(πn))∫_0^∞ (1 - |φ(t)|²) ψ(ht)² dt`.

use std::f64::consts::PI;

use crate::charfn::{
    head_moment, head_moment_quadrature, tail_energy, tail_moment, tail_moment_quadrature, CharModel,
};
use crate::optimize::{first_argmin, golden_section_min, log_grid};
use crate::quadrature::integrate_panels;
use crate::{Error, Result};

mod monte_carlo;
mod superkernel;

pub use monte_carlo::{mc_ise_oracle, McIse};
pub use superkernel::{superkernel_comparison, superkernel_comparison_for, SuperkernelComparison};

const QUAD_TOL: f64 = 1e-13;

/// Number of points in the log-spaced scan of [`minimize_mise_over_h`].
pub const SCAN_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiseBreakdown {
    pub bias_sq: f64,
    pub variance: f64,
    pub total: f64,
    pub h: f64,
    pub n: u64,
    pub r: u32,
}

impl MiseBreakdown {
    pub fn new(bias_sq: f64, variance: f64, h: f64, n: u64, r: u32) -> Self {
        MiseBreakdown {
            bias_sq,
            variance,
            total: bias_sq + variance,
            h,
            n,
            r,
        }
    }
}

/// A kernel described by its Fourier transform `ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpectrum {
    /// `ψ = 1` on `[-1, 1]`, zero outside.
    Sinc,
    /// Gaussian kernel, `ψ(t) = exp(-t²/2)`.
    NormalKernel,
    /// Cauchy kernel, `ψ(t) = exp(-|t|)`.
    CauchyKernel,
    /// `ψ = 1` on `|t| ≤ Δ`, linear to zero at `2Δ`.
    Trapezoid { delta: f64 },
}

impl KernelSpectrum {
    pub fn psi(&self, t: f64) -> f64 {
        let t = t.abs();
        match *self {
            KernelSpectrum::Sinc => {
                if t <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            KernelSpectrum::NormalKernel => (-0.5 * t * t).exp(),
            KernelSpectrum::CauchyKernel => (-t).exp(),
            KernelSpectrum::Trapezoid { delta } => {
                if t <= delta {
                    1.0
                } else if t < 2.0 * delta {
                    2.0 - t / delta
                } else {
                    0.0
                }
            }
        }
    }

    /// Breakpoints of `ψ` in `[0, ∞)` and the point beyond which `ψ²` is
    /// negligible (below 1e-35) or zero.
    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            KernelSpectrum::Sinc => vec![1.0],
            KernelSpectrum::NormalKernel => vec![9.0],
            KernelSpectrum::CauchyKernel => vec![40.0],
            KernelSpectrum::Trapezoid { delta } => vec![delta, 2.0 * delta],
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            KernelSpectrum::Trapezoid { delta } if !(delta > 0.0 && delta < 1.0) => {
                Err(Error::domain(format!("trapezoid Δ must lie in (0, 1), got {delta}")))
            }
            _ => Ok(()),
        }
    }
}

fn check_args(n: u64, h: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("sample size n must be at least 1"));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::domain(format!("bandwidth h must be positive, got {h}")));
    }
    Ok(())
}

/// Exact MISE of the `r`-th derivative of the sinc estimator.
///
/// `bias_sq = (1/2π)∫_{|t|>1/h} t^{2r}|φ|²` and
/// `variance = (1/(2πn))∫_{|t|≤1/h} t^{2r}(1 - |φ|²)`. Closed forms are used
/// wherever the model has them.
pub fn sinc_mise(model: &CharModel, n: u64, h: f64, r: u32) -> Result<MiseBreakdown> {
    check_args(n, h)?;
    let delta = 1.0 / h;
    let bias = tail_moment(model, r, delta)?.value;
    let head = head_moment(model, r, delta)?.value;
    Ok(sinc_breakdown(bias, head, n, h, r))
}

/// [`sinc_mise`] with both spectral integrals done by quadrature.
pub fn sinc_mise_quadrature(model: &CharModel, n: u64, h: f64, r: u32) -> Result<MiseBreakdown> {
    check_args(n, h)?;
    let delta = 1.0 / h;
    let bias = tail_moment_quadrature(model, r, delta)?.value;
    let head = head_moment_quadrature(model, r, delta)?.value;
    Ok(sinc_breakdown(bias, head, n, h, r))
}

fn sinc_breakdown(bias: f64, head: f64, n: u64, h: f64, r: u32) -> MiseBreakdown {
    let e = 2 * r + 1;
    let full = 1.0 / (PI * e as f64 * h.powi(e as i32));
    let variance = ((full - head) / n as f64).max(0.0);
    MiseBreakdown::new(bias, variance, h, n, r)
}

/// The sinc MISE total in the form `1/(πnh) + R(f) - (1 + 1/n)·(1/π)∫_0^{1/h}|φ|²`.
pub fn sinc_mise_head_form(model: &CharModel, n: u64, h: f64) -> Result<f64> {
    check_args(n, h)?;
    let rough = crate::charfn::roughness(model, 0)?.value;
    let head = crate::charfn::head_energy(model, 1.0 / h)?.value;
    let nf = n as f64;
    Ok(1.0 / (PI * nf * h) + rough - (1.0 + 1.0 / nf) * head)
}

/// Exact MISE of a conventional (or any square-integrable) kernel estimator.
pub fn conventional_mise(kernel: &KernelSpectrum, model: &CharModel, n: u64, h: f64) -> Result<MiseBreakdown> {
    check_args(n, h)?;
    kernel.validate()?;
    model.validate()?;
    let nf = n as f64;
    match (*kernel, *model) {
        (KernelSpectrum::Sinc, _) => sinc_mise(model, n, h, 0),
        (KernelSpectrum::NormalKernel, CharModel::Normal { sigma }) => {
            let s2 = sigma * sigma;
            let c = 0.5 / PI.sqrt();
            let bias = c * (1.0 / sigma - 2.0 / (s2 + 0.5 * h * h).sqrt() + 1.0 / (s2 + h * h).sqrt());
            let variance = c / nf * (1.0 / h - 1.0 / (s2 + h * h).sqrt());
            Ok(MiseBreakdown::new(bias, variance, h, n, 0))
        }
        (KernelSpectrum::CauchyKernel, CharModel::Cauchy { scale }) => {
            let s2 = 2.0 * scale;
            let bias = (1.0 / s2 - 2.0 / (s2 + h) + 1.0 / (s2 + 2.0 * h)) / PI;
            let variance = (0.5 / h - 1.0 / (s2 + 2.0 * h)) / (PI * nf);
            Ok(MiseBreakdown::new(bias, variance, h, n, 0))
        }
        _ => conventional_mise_quadrature(kernel, model, n, h),
    }
}

/// [`conventional_mise`] by quadrature of the spectral integrals.
///
/// Both integrands are integrated over `[0, K/h]`, where `ψ(ht)` is
/// negligible beyond `K`; the bias picks up the remaining `|φ|²` mass through
/// the tail energy.
pub fn conventional_mise_quadrature(
    kernel: &KernelSpectrum,
    model: &CharModel,
    n: u64,
    h: f64,
) -> Result<MiseBreakdown> {
    check_args(n, h)?;
    kernel.validate()?;
    model.validate()?;
    let width = model.spectral_scale().min(1.0 / h);
    let psi = |t: f64| kernel.psi(h * t);
    let bias_f = |t: f64| model.cf_sq(t) * (1.0 - psi(t)).powi(2);
    let var_f = |t: f64| (1.0 - model.cf_sq(t)) * psi(t).powi(2);

    let mut bias = 0.0;
    let mut var = 0.0;
    let mut a = 0.0;
    for b in kernel.breakpoints().into_iter().map(|k| k / h) {
        bias += integrate_panels(bias_f, a, b, width, QUAD_TOL).value;
        var += integrate_panels(var_f, a, b, width, QUAD_TOL).value;
        a = b;
    }
    let bias = bias / PI + tail_energy(model, a)?.value;
    let variance = var / (PI * n as f64);
    if !(bias.is_finite() && variance.is_finite()) {
        return Err(Error::infeasible("spectral integrals did not converge"));
    }
    Ok(MiseBreakdown::new(bias, variance, h, n, 0))
}

/// Global minimum of `evaluator` over `[h_lo, h_hi]`: a 2000-point log scan
/// followed by golden-section refinement of the best bracket. Ties go to the
/// smallest `h`; the refined point is kept only if strictly better.
pub fn minimize_mise_over_h<F>(evaluator: F, h_lo: f64, h_hi: f64) -> Result<(f64, MiseBreakdown)>
where
    F: Fn(f64) -> Result<MiseBreakdown>,
{
    if !(h_lo > 0.0 && h_hi > h_lo && h_hi.is_finite()) {
        return Err(Error::domain(format!("invalid bandwidth range [{h_lo}, {h_hi}]")));
    }
    let grid = log_grid(h_lo, h_hi, SCAN_POINTS);
    scan_then_refine(&evaluator, &grid, true)
}

/// Minimum of `evaluator` over the grid `h_lo, h_lo + step, …, ≤ h_hi`
/// without refinement. Ties go to the smallest `h`.
pub fn minimize_mise_on_grid<F>(evaluator: F, h_lo: f64, h_hi: f64, step: f64) -> Result<(f64, MiseBreakdown)>
where
    F: Fn(f64) -> Result<MiseBreakdown>,
{
    if !(h_lo > 0.0 && h_hi >= h_lo && step > 0.0) {
        return Err(Error::domain(format!("invalid bandwidth grid [{h_lo}, {h_hi}] step {step}")));
    }
    let count = ((h_hi - h_lo) / step + 1e-9).floor() as usize;
    // Integer multiples of the step keep points such as 0.38 within one rounding.
    let k0 = (h_lo / step).round();
    let aligned = (k0 * step - h_lo).abs() <= 1e-12 * h_lo;
    let grid: Vec<f64> = (0..=count)
        .map(|i| {
            if aligned {
                (k0 + i as f64) * step
            } else {
                h_lo + i as f64 * step
            }
        })
        .collect();
    scan_then_refine(&evaluator, &grid, false)
}

fn scan_then_refine<F>(evaluator: &F, grid: &[f64], refine: bool) -> Result<(f64, MiseBreakdown)>
where
    F: Fn(f64) -> Result<MiseBreakdown>,
{
    let values = grid.iter().map(|&h| evaluator(h)).collect::<Result<Vec<_>>>()?;
    let totals: Vec<f64> = values.iter().map(|b| b.total).collect();
    let best = first_argmin(&totals).ok_or_else(|| Error::infeasible("MISE is undefined on the whole range"))?;
    if !refine || grid.len() < 3 {
        return Ok((grid[best], values[best]));
    }
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(grid.len() - 1)];
    let (h, _) = golden_section_min(
        |h| evaluator(h).map(|m| m.total).unwrap_or(f64::INFINITY),
        a,
        b,
        1e-12 * b,
    );
    let refined = evaluator(h)?;
    if refined.total < values[best].total {
        Ok((h, refined))
    } else {
        Ok((grid[best], values[best]))
    }
}

#[cfg(test)]
mod tests;

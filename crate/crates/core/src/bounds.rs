//! Upper bounds on the sinc MISE under smoothness, bounded-variation,
//! exponential-decay and band-limitation assumptions.
//!
//! Every bound dominates the exact MISE at the same `(n, h)`. The factors
//! `ε(h) ≤ 1` that sharpen the smooth and exponential bounds are set to one
//! unless a model is supplied to [`bound_smooth_exact_epsilon`].

use std::f64::consts::PI;

use crate::charfn::{roughness, tail_moment, CharModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Smooth,
    BoundedVariation,
    Exponential,
    BandLimited,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub regime: Regime,
    pub r: u32,
    /// Named numeric inputs, in the order given.
    pub inputs: Vec<(&'static str, f64)>,
    /// The bandwidth at which the bound holds.
    pub h_used: f64,
    /// Whether `h_used` was chosen by the bound's own recommendation.
    pub optimized: bool,
    pub bound: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("sample size n must be at least 1"))
    } else {
        Ok(())
    }
}

/// `1/(π(2r+1) n h^{2r+1})`, the variance part of the smooth bound.
fn smooth_variance(r: u32, n: u64, h: f64) -> f64 {
    let e = 2 * r + 1;
    1.0 / (PI * e as f64 * n as f64 * h.powi(e as i32))
}

/// Bound for `f^{(r+m)} ∈ L²` with `R(f^{(r+m)}) = r_frm`:
/// `h^{2m} R + 1/(π(2r+1) n h^{2r+1})`.
///
/// With `h = None`, the bound is minimised over `h`, giving
/// `h* = (2πmnR)^{-1/(2r+2m+1)}`.
pub fn bound_smooth(r: u32, m: u32, r_frm: f64, n: u64, h: Option<f64>) -> Result<BoundReport> {
    positive("R", r_frm)?;
    check_n(n)?;
    let (h_used, optimized) = match h {
        Some(h) => {
            positive("h", h)?;
            (h, false)
        }
        None => {
            if m == 0 {
                return Err(Error::domain("an optimised smooth bound needs m ≥ 1"));
            }
            let d = (2 * r + 2 * m + 1) as f64;
            ((2.0 * PI * m as f64 * n as f64 * r_frm).powf(-1.0 / d), true)
        }
    };
    let bound = h_used.powi(2 * m as i32) * r_frm + smooth_variance(r, n, h_used);
    Ok(BoundReport {
        regime: Regime::Smooth,
        r,
        inputs: vec![("m", m as f64), ("R", r_frm), ("n", n as f64)],
        h_used,
        optimized,
        bound,
    })
}

/// The constant `C_{m,r}` in `min_h bound = C_{m,r} R^{(2r+1)/D} n^{-2m/D}`,
/// `D = 2r + 2m + 1`.
pub fn smooth_rate_constant(r: u32, m: u32) -> f64 {
    let d = (2 * r + 2 * m + 1) as f64;
    let e = (2 * r + 1) as f64;
    let k = 2.0 * PI * m as f64;
    k.powf(-2.0 * m as f64 / d) + k.powf(e / d) / (PI * e)
}

/// [`bound_smooth`] with the exact `ε(h)` of the model: the bias term becomes
/// `h^{2m}·(1/2π)∫_{|t|>1/h} t^{2(r+m)}|φ|²`.
pub fn bound_smooth_exact_epsilon(model: &CharModel, r: u32, m: u32, n: u64, h: f64) -> Result<BoundReport> {
    positive("h", h)?;
    check_n(n)?;
    let rough = roughness(model, r + m)?.value;
    let tail = tail_moment(model, r + m, 1.0 / h)?.value;
    Ok(BoundReport {
        regime: Regime::Smooth,
        r,
        inputs: vec![("m", m as f64), ("R", rough), ("n", n as f64), ("epsilon", tail / rough)],
        h_used: h,
        optimized: false,
        bound: h.powi(2 * m as i32) * tail + smooth_variance(r, n, h),
    })
}

/// Bound for `f^{(m)}` of total variation `v`:
/// `h^{2m+1} V²/((2m+1)π) + 1/(πnh)`; with `h = None` it is evaluated at
/// `h = (nV²)^{-1/(2m+2)}`.
pub fn bound_variation(m: u32, v: f64, n: u64, h: Option<f64>) -> Result<BoundReport> {
    positive("V", v)?;
    check_n(n)?;
    let nf = n as f64;
    let (h_used, optimized) = match h {
        Some(h) => {
            positive("h", h)?;
            (h, false)
        }
        None => ((nf * v * v).powf(-1.0 / (2 * m + 2) as f64), true),
    };
    let e = (2 * m + 1) as f64;
    let bound = h_used.powi(2 * m as i32 + 1) * v * v / (e * PI) + 1.0 / (PI * nf * h_used);
    Ok(BoundReport {
        regime: Regime::BoundedVariation,
        r: 0,
        inputs: vec![("m", m as f64), ("V", v), ("n", nf)],
        h_used,
        optimized,
        bound,
    })
}

/// Bound for `(1/2π)∫ t^{2r} e^{ρ|t|^α}|φ|² = C < ∞`:
/// `C e^{-ρ/h^α} + 1/(πnh^{2r+1})`.
///
/// With `h = None` it is evaluated at `h = (ln n / ρ)^{-1/α}`, giving
/// `(C + (ln n / ρ)^{(2r+1)/α}/π)/n`; `weakened` reports the looser
/// `(C + ρ^{-1/α}/π)(ln n)^{1/α}/n` form for `r = 0`.
pub fn bound_exponential(
    r: u32,
    c: f64,
    rho: f64,
    alpha: f64,
    n: u64,
    h: Option<f64>,
    weakened: bool,
) -> Result<BoundReport> {
    positive("C", c)?;
    positive("ρ", rho)?;
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!("α must lie in (0, 2], got {alpha}")));
    }
    check_n(n)?;
    let nf = n as f64;
    let inputs = vec![("C", c), ("rho", rho), ("alpha", alpha), ("n", nf)];
    let e = (2 * r + 1) as f64;
    match h {
        Some(h) => {
            positive("h", h)?;
            if weakened {
                return Err(Error::domain("the weakened form applies only to the recommended h"));
            }
            Ok(BoundReport {
                regime: Regime::Exponential,
                r,
                inputs,
                h_used: h,
                optimized: false,
                bound: c * (-rho / h.powf(alpha)).exp() + 1.0 / (PI * nf * h.powf(e)),
            })
        }
        None => {
            if n <= 2 {
                return Err(Error::domain(format!("the recommended bandwidth needs n > 2, got {n}")));
            }
            if weakened && r != 0 {
                return Err(Error::domain("the weakened form is stated for r = 0 only"));
            }
            let ln_n = nf.ln();
            let h_used = (ln_n / rho).powf(-1.0 / alpha);
            let bound = if weakened {
                (c + 1.0 / (PI * rho.powf(1.0 / alpha))) * ln_n.powf(1.0 / alpha) / nf
            } else {
                (c + (ln_n / rho).powf(e / alpha) / PI) / nf
            };
            Ok(BoundReport {
                regime: Regime::Exponential,
                r,
                inputs,
                h_used,
                optimized: true,
                bound,
            })
        }
    }
}

/// Bound for `φ = 0` outside `[-T, T]`: `1/(πnh^{2r+1})` for `h ≤ 1/T`.
pub fn bound_bandlimited(r: u32, t: f64, n: u64, h: f64) -> Result<BoundReport> {
    positive("T", t)?;
    positive("h", h)?;
    check_n(n)?;
    if h > 1.0 / t {
        return Err(Error::OutOfValidity(format!(
            "h = {h} exceeds 1/T = {}; the bias is no longer zero",
            1.0 / t
        )));
    }
    Ok(BoundReport {
        regime: Regime::BandLimited,
        r,
        inputs: vec![("T", t), ("n", n as f64)],
        h_used: h,
        optimized: false,
        bound: 1.0 / (PI * n as f64 * h.powi(2 * r as i32 + 1)),
    })
}

//! Analytic characteristic-function models and the spectral functionals
//! consumed by every MISE formula.
//!
//! All functionals are one-sided integrals of `|φ(t)|²` (optionally weighted
//! by `t^{2r}`), normalised so that `tail_energy(δ)` is exactly the
//! integrated squared bias of the sinc estimator at `h = 1/δ`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Cauchy as CauchyDist, Distribution, Normal as NormalDist};

use crate::quadrature::{integrate, integrate_panels, integrate_to_infinity, Integral};
use crate::{Error, Result};

const QUAD_TOL: f64 = 1e-12;

/// Shape of a band-limited characteristic function on `[-T, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandShape {
    /// `|φ(t)| = (1 - |t|/T)^power`, a Pólya-type function (valid for `power ≥ 1`).
    /// `power = 1` is the Fejér density `T/(2π) · (sin(Tx/2)/(Tx/2))²`.
    Polya { power: f64 },
}

/// A target density described through its characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharModel {
    /// Normal density with standard deviation `sigma`: `|φ|² = exp(-σ²t²)`.
    Normal { sigma: f64 },
    /// Cauchy density with scale `scale`: `|φ|² = exp(-2·scale·|t|)`.
    Cauchy { scale: f64 },
    /// Convolution of `k` uniforms on `[-1, 1]`: `|φ|² = (sin t / t)^{2k}`.
    UniformPower { k: u32 },
    /// `|φ|² = a/|t|^m` for `|t| > c`, constant `min(1, a/c^m)` on `|t| ≤ c`.
    PowerTail { a: f64, c: f64, m: f64 },
    /// `φ(t) = 0` for `|t| > t_max`.
    BandLimited { t_max: f64, shape: BandShape },
}

/// How a [`SpectralFunctional`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFunctional {
    pub value: f64,
    /// Zero for closed forms.
    pub absolute_error_estimate: f64,
    pub method: Method,
}

impl SpectralFunctional {
    fn closed(value: f64) -> Self {
        SpectralFunctional {
            value,
            absolute_error_estimate: 0.0,
            method: Method::ClosedForm,
        }
    }

    fn quadrature(integral: Integral, factor: f64) -> Self {
        SpectralFunctional {
            value: integral.value * factor,
            absolute_error_estimate: integral.abs_error * factor.abs(),
            method: Method::Quadrature,
        }
    }
}

impl CharModel {
    pub fn normal(sigma: f64) -> Result<Self> {
        CharModel::Normal { sigma }.validated()
    }

    pub fn cauchy(scale: f64) -> Result<Self> {
        CharModel::Cauchy { scale }.validated()
    }

    pub fn uniform_power(k: u32) -> Result<Self> {
        CharModel::UniformPower { k }.validated()
    }

    pub fn power_tail(a: f64, c: f64, m: f64) -> Result<Self> {
        CharModel::PowerTail { a, c, m }.validated()
    }

    /// Band-limited model with a triangular characteristic function.
    pub fn fejer(t_max: f64) -> Result<Self> {
        CharModel::BandLimited {
            t_max,
            shape: BandShape::Polya { power: 1.0 },
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let ok = match *self {
            CharModel::Normal { sigma } => positive(sigma),
            CharModel::Cauchy { scale } => positive(scale),
            CharModel::UniformPower { k } => k >= 1,
            CharModel::PowerTail { a, c, m } => positive(a) && positive(c) && m.is_finite() && m > 3.0,
            CharModel::BandLimited {
                t_max,
                shape: BandShape::Polya { power },
            } => positive(t_max) && power.is_finite() && power >= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid characteristic-function model {self:?}")))
        }
    }

    /// `|φ(t)|²`.
    pub fn cf_sq(&self, t: f64) -> f64 {
        let t = t.abs();
        match *self {
            CharModel::Normal { sigma } => (-(sigma * t).powi(2)).exp(),
            CharModel::Cauchy { scale } => (-2.0 * scale * t).exp(),
            CharModel::UniformPower { k } => sinc(t).powi(2 * k as i32),
            CharModel::PowerTail { a, c, m } => {
                if t > c {
                    a / t.powf(m)
                } else {
                    power_tail_head(a, c, m)
                }
            }
            CharModel::BandLimited {
                t_max,
                shape: BandShape::Polya { power },
            } => {
                if t >= t_max {
                    0.0
                } else {
                    (1.0 - t / t_max).powf(2.0 * power)
                }
            }
        }
    }

    /// Natural length scale of `|φ|²`, used to size quadrature panels.
    pub fn spectral_scale(&self) -> f64 {
        match *self {
            CharModel::Normal { sigma } => 1.0 / sigma,
            CharModel::Cauchy { scale } => 0.5 / scale,
            CharModel::UniformPower { .. } => PI,
            CharModel::PowerTail { c, .. } => c,
            CharModel::BandLimited { t_max, .. } => t_max / 4.0,
        }
    }

    /// A point beyond which `|φ(t)| < level` is guaranteed (`0 < level < 1`).
    pub fn modulus_cutoff(&self, level: f64) -> f64 {
        match *self {
            CharModel::Normal { sigma } => (-2.0 * level.ln()).sqrt() / sigma,
            CharModel::Cauchy { scale } => -level.ln() / scale,
            CharModel::UniformPower { k } => level.powf(-1.0 / k as f64),
            CharModel::PowerTail { a, c, m } => c.max((a / (level * level)).powf(1.0 / m)),
            CharModel::BandLimited { t_max, .. } => t_max,
        }
    }

    /// Whether `∫ t^{2r} |φ(t)|² dt` is finite.
    fn moment_finite(&self, r: u32) -> bool {
        match *self {
            CharModel::UniformPower { k } => 2 * k > 2 * r + 1,
            CharModel::PowerTail { m, .. } => m > 2.0 * r as f64 + 1.0,
            _ => true,
        }
    }

    fn moment_condition(&self, r: u32) -> Error {
        let decay = match *self {
            CharModel::UniformPower { k } => format!("|φ|² decays like t^-{}", 2 * k),
            CharModel::PowerTail { m, .. } => format!("|φ|² decays like t^-{m}"),
            _ => unreachable!(),
        };
        Error::infeasible(format!(
            "∫ t^{} |φ(t)|² dt diverges: {decay}, needs decay faster than t^-{}",
            2 * r,
            2 * r + 1
        ))
    }

    /// The `r`-th derivative of the density at `x`, where it has a closed form
    /// (normal and Cauchy models, `r ≤ 2`).
    pub fn density_derivative(&self, r: u32, x: f64) -> Option<f64> {
        match (*self, r) {
            (CharModel::Normal { sigma }, _) => {
                let z = x / sigma;
                let pdf = (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt());
                match r {
                    0 => Some(pdf),
                    1 => Some(-z / sigma * pdf),
                    2 => Some((z * z - 1.0) / (sigma * sigma) * pdf),
                    _ => None,
                }
            }
            (CharModel::Cauchy { scale: s }, _) => {
                let q = s * s + x * x;
                match r {
                    0 => Some(s / (PI * q)),
                    1 => Some(-2.0 * s * x / (PI * q * q)),
                    2 => Some(s * (6.0 * x * x - 2.0 * s * s) / (PI * q * q * q)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// `φ(t)` for the models whose characteristic function is real and
    /// known in full (all but the power-tail model, which only fixes `|φ|`).
    pub fn cf(&self, t: f64) -> Option<f64> {
        let t = t.abs();
        match *self {
            CharModel::Normal { sigma } => Some((-0.5 * (sigma * t).powi(2)).exp()),
            CharModel::Cauchy { scale } => Some((-scale * t).exp()),
            CharModel::UniformPower { k } => Some(sinc(t).powi(k as i32)),
            CharModel::PowerTail { .. } => None,
            CharModel::BandLimited {
                t_max,
                shape: BandShape::Polya { power },
            } => Some(if t >= t_max { 0.0 } else { (1.0 - t / t_max).powf(power) }),
        }
    }

    /// Draws `n` observations, for the models with a direct sampler.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Option<Vec<f64>> {
        match *self {
            CharModel::Normal { sigma } => {
                let d = NormalDist::new(0.0, sigma).ok()?;
                Some((0..n).map(|_| d.sample(rng)).collect())
            }
            CharModel::Cauchy { scale } => {
                let d = CauchyDist::new(0.0, scale).ok()?;
                Some((0..n).map(|_| d.sample(rng)).collect())
            }
            _ => None,
        }
    }
}

fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

fn power_tail_head(a: f64, c: f64, m: f64) -> f64 {
    (a / c.powf(m)).min(1.0)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `Γ(r + 1/2)`.
fn gamma_half(r: u32) -> f64 {
    factorial(2 * r) * PI.sqrt() / (4f64.powi(r as i32) * factorial(r))
}

/// Upper incomplete gamma `Γ(r + 1/2, x)` by upward recurrence from `Γ(1/2, x)`.
fn upper_gamma_half(r: u32, x: f64) -> f64 {
    let mut g = PI.sqrt() * libm::erfc(x.sqrt());
    let mut s = 0.5;
    for _ in 0..r {
        g = s * g + x.powf(s) * (-x).exp();
        s += 1.0;
    }
    g
}

/// Upper incomplete gamma `Γ(k + 1, x)` for integer `k`.
fn upper_gamma_int(k: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..=k {
        term *= x / j as f64;
        sum += term;
    }
    factorial(k) * (-x).exp() * sum
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_nan() || delta <= 0.0 {
        Err(Error::domain(format!("cutoff δ must be positive, got {delta}")))
    } else {
        Ok(())
    }
}

/// `|φ(t)|²` for `model`.
pub fn cf_sq(model: &CharModel, t: f64) -> f64 {
    model.cf_sq(t)
}

/// `(1/2π)∫_{|t|>δ} |φ(t)|² dt`, the integrated squared bias of the sinc
/// estimator at `h = 1/δ`.
pub fn tail_energy(model: &CharModel, delta: f64) -> Result<SpectralFunctional> {
    tail_moment(model, 0, delta)
}

/// `(1/π)∫_0^δ |φ(t)|² dt`.
pub fn head_energy(model: &CharModel, delta: f64) -> Result<SpectralFunctional> {
    head_moment(model, 0, delta)
}

/// `R(f^{(m)}) = (1/2π)∫ t^{2m} |φ(t)|² dt`.
pub fn roughness(model: &CharModel, m: u32) -> Result<SpectralFunctional> {
    model.validate()?;
    if !model.moment_finite(m) {
        return Err(model.moment_condition(m));
    }
    let value = match *model {
        CharModel::Normal { sigma } => gamma_half(m) / (2.0 * PI * sigma.powi(2 * m as i32 + 1)),
        CharModel::Cauchy { scale } => factorial(2 * m) / (PI * (2.0 * scale).powi(2 * m as i32 + 1)),
        CharModel::PowerTail { a, c, m: p } => {
            let e = 2.0 * m as f64 + 1.0;
            (power_tail_head(a, c, p) * c.powf(e) / e + a * c.powf(e - p) / (p - e)) / PI
        }
        _ => return tail_moment_quadrature(model, m, 0.0),
    };
    Ok(SpectralFunctional::closed(value))
}

/// `(1/2π)∫_{|t|>δ} t^{2r} |φ(t)|² dt`. `δ = ∞` gives zero.
pub fn tail_moment(model: &CharModel, r: u32, delta: f64) -> Result<SpectralFunctional> {
    model.validate()?;
    check_delta(delta)?;
    if !model.moment_finite(r) {
        return Err(model.moment_condition(r));
    }
    if delta.is_infinite() {
        return Ok(SpectralFunctional::closed(0.0));
    }
    let value = match *model {
        CharModel::Normal { sigma } => {
            if r == 0 {
                libm::erfc(sigma * delta) / (2.0 * sigma * PI.sqrt())
            } else {
                upper_gamma_half(r, (sigma * delta).powi(2)) / (2.0 * PI * sigma.powi(2 * r as i32 + 1))
            }
        }
        CharModel::Cauchy { scale } => {
            let rate = 2.0 * scale;
            upper_gamma_int(2 * r, rate * delta) / (PI * rate.powi(2 * r as i32 + 1))
        }
        CharModel::PowerTail { a, c, m } => {
            let e = 2.0 * r as f64 + 1.0;
            let beyond = |x: f64| a * x.powf(e - m) / (m - e);
            if delta > c {
                beyond(delta) / PI
            } else {
                (power_tail_head(a, c, m) * (c.powf(e) - delta.powf(e)) / e + beyond(c)) / PI
            }
        }
        CharModel::BandLimited { t_max, .. } if delta >= t_max => 0.0,
        _ => return tail_moment_quadrature(model, r, delta),
    };
    Ok(SpectralFunctional::closed(value))
}

/// `(1/π)∫_0^δ t^{2r} |φ(t)|² dt`. `δ = ∞` gives `R(f^{(r)})`.
pub fn head_moment(model: &CharModel, r: u32, delta: f64) -> Result<SpectralFunctional> {
    model.validate()?;
    check_delta(delta)?;
    if delta.is_infinite() {
        return roughness(model, r);
    }
    let value = match *model {
        CharModel::Normal { sigma } => {
            if r == 0 {
                libm::erf(sigma * delta) / (2.0 * sigma * PI.sqrt())
            } else {
                let x = (sigma * delta).powi(2);
                (gamma_half(r) - upper_gamma_half(r, x)) / (2.0 * PI * sigma.powi(2 * r as i32 + 1))
            }
        }
        CharModel::Cauchy { scale } => {
            let rate = 2.0 * scale;
            let k = 2 * r;
            (factorial(k) - upper_gamma_int(k, rate * delta)) / (PI * rate.powi(k as i32 + 1))
        }
        CharModel::PowerTail { a, c, m } => {
            let e = 2.0 * r as f64 + 1.0;
            let head = power_tail_head(a, c, m);
            if delta <= c {
                head * delta.powf(e) / e / PI
            } else {
                let pow_part = if (m - e).abs() < 1e-12 {
                    a * (delta / c).ln()
                } else {
                    a * (c.powf(e - m) - delta.powf(e - m)) / (m - e)
                };
                (head * c.powf(e) / e + pow_part) / PI
            }
        }
        CharModel::BandLimited {
            t_max,
            shape: BandShape::Polya { power },
        } if r == 0 => {
            let d = delta.min(t_max);
            let q = 2.0 * power + 1.0;
            t_max * (1.0 - (1.0 - d / t_max).powf(q)) / q / PI
        }
        _ => return head_moment_quadrature(model, r, delta),
    };
    Ok(SpectralFunctional::closed(value))
}

/// Quadrature route for [`tail_moment`], available for every model.
pub fn tail_moment_quadrature(model: &CharModel, r: u32, delta: f64) -> Result<SpectralFunctional> {
    model.validate()?;
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::domain(format!("cutoff δ must be finite and nonnegative, got {delta}")));
    }
    if !model.moment_finite(r) {
        return Err(model.moment_condition(r));
    }
    let f = |t: f64| t.powi(2 * r as i32) * model.cf_sq(t);
    let scale = model.spectral_scale();
    let integral = match *model {
        CharModel::BandLimited { t_max, .. } => {
            if delta >= t_max {
                Integral::ZERO
            } else {
                integrate_panels(f, delta, t_max, scale, QUAD_TOL)
            }
        }
        CharModel::PowerTail { c, .. } if delta < c => {
            integrate(f, delta, c, QUAD_TOL, 1e-15) + integrate_to_infinity(f, c, c, QUAD_TOL)
        }
        _ => integrate_to_infinity(f, delta, scale, QUAD_TOL),
    };
    Ok(SpectralFunctional::quadrature(integral, 1.0 / PI))
}

/// Quadrature route for [`head_moment`], available for every model.
pub fn head_moment_quadrature(model: &CharModel, r: u32, delta: f64) -> Result<SpectralFunctional> {
    model.validate()?;
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::domain(format!("cutoff δ must be finite and nonnegative, got {delta}")));
    }
    let f = |t: f64| t.powi(2 * r as i32) * model.cf_sq(t);
    let upper = match *model {
        CharModel::BandLimited { t_max, .. } => delta.min(t_max),
        _ => delta,
    };
    let integral = match *model {
        CharModel::PowerTail { c, .. } if upper > c => {
            integrate(f, 0.0, c, QUAD_TOL, 1e-15) + integrate_panels(f, c, upper, c.max(1.0), QUAD_TOL)
        }
        _ => integrate_panels(f, 0.0, upper, model.spectral_scale(), QUAD_TOL),
    };
    Ok(SpectralFunctional::quadrature(integral, 1.0 / PI))
}

/// Quadrature route for [`tail_energy`].
pub fn tail_energy_quadrature(model: &CharModel, delta: f64) -> Result<SpectralFunctional> {
    check_delta(delta)?;
    tail_moment_quadrature(model, 0, delta)
}

/// Quadrature route for [`head_energy`].
pub fn head_energy_quadrature(model: &CharModel, delta: f64) -> Result<SpectralFunctional> {
    check_delta(delta)?;
    head_moment_quadrature(model, 0, delta)
}

/// `C = (1/2π)∫ t^{2r} e^{ρ|t|^α} |φ(t)|² dt`, the constant of the
/// exponential-decay MISE bounds.
pub fn weighted_exponential_energy(model: &CharModel, rho: f64, alpha: f64, r: u32) -> Result<SpectralFunctional> {
    model.validate()?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::domain(format!("ρ must be positive, got {rho}")));
    }
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!("α must lie in (0, 2], got {alpha}")));
    }
    let divergent = |why: String| Err(Error::infeasible(format!("weighted integral diverges: {why}")));
    match *model {
        CharModel::Normal { sigma } if alpha == 2.0 => {
            let rate = sigma * sigma - rho;
            if rate <= 0.0 {
                return divergent(format!("ρ = {rho} ≥ σ² = {}", sigma * sigma));
            }
            Ok(SpectralFunctional::closed(
                gamma_half(r) / (2.0 * PI * rate.powf(r as f64 + 0.5)),
            ))
        }
        CharModel::Cauchy { scale } if alpha >= 1.0 => {
            let rate = 2.0 * scale - rho;
            if alpha > 1.0 {
                return divergent(format!("|φ|² decays like e^(-2|t|·scale), weight grows like e^(ρ|t|^{alpha})"));
            }
            if rate <= 0.0 {
                return divergent(format!("ρ = {rho} ≥ 2·scale = {}", 2.0 * scale));
            }
            Ok(SpectralFunctional::closed(
                factorial(2 * r) / (PI * rate.powi(2 * r as i32 + 1)),
            ))
        }
        CharModel::UniformPower { .. } | CharModel::PowerTail { .. } => {
            divergent("|φ|² decays only polynomially".into())
        }
        CharModel::BandLimited { t_max, .. } => {
            let f = |t: f64| t.powi(2 * r as i32) * (rho * t.powf(alpha)).exp() * model.cf_sq(t);
            let integral = integrate_panels(f, 0.0, t_max, model.spectral_scale(), QUAD_TOL);
            Ok(SpectralFunctional::quadrature(integral, 1.0 / PI))
        }
        _ => {
            let f = |t: f64| t.powi(2 * r as i32) * (rho * t.powf(alpha)).exp() * model.cf_sq(t);
            let integral = integrate_to_infinity(f, 0.0, model.spectral_scale(), QUAD_TOL);
            Ok(SpectralFunctional::quadrature(integral, 1.0 / PI))
        }
    }
}

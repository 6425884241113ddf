//! Monte Carlo estimate of the sinc MISE from realised integrated squared
//! errors.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::check_args;
use crate::charfn::{roughness, CharModel};
use crate::ecf::Sample;
use crate::estimator::sinc_fn_derivative;
use crate::quadrature::integrate_panels;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McIse {
    pub mean_ise: f64,
    /// `None` when only one replication was run.
    pub std_error: Option<f64>,
    pub reps: usize,
}

/// Mean ISE of `f_n^{(r)}` over `reps` independent samples of size `n`.
///
/// Replication `k` draws from a ChaCha8 generator seeded with `seed` on
/// stream `k`, so results do not depend on thread scheduling.
pub fn mc_ise_oracle(model: &CharModel, n: u64, h: f64, r: u32, reps: usize, seed: u64) -> Result<McIse> {
    check_args(n, h)?;
    if reps == 0 {
        return Err(Error::domain("reps must be at least 1"));
    }
    if !matches!(model, CharModel::Normal { .. } | CharModel::Cauchy { .. }) {
        return Err(Error::Unsupported(format!(
            "Monte Carlo ISE needs a normal or Cauchy model, got {model:?}"
        )));
    }
    if r > 2 {
        return Err(Error::Unsupported(format!("Monte Carlo ISE supports r ≤ 2, got {r}")));
    }
    let rough = roughness(model, r)?.value;

    let ises = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(rep as u64);
            let values = model.sample(n as usize, &mut rng).expect("sampler model");
            let sample = Sample::new(values)?;
            Ok(replicate_ise(model, &sample, h, r, rough))
        })
        .collect::<Result<Vec<f64>>>()?;

    let k = reps as f64;
    let mean = ises.iter().sum::<f64>() / k;
    let std_error = (reps > 1).then(|| {
        let var = ises.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    });
    Ok(McIse {
        mean_ise: mean,
        std_error,
        reps,
    })
}

/// `∫(f_n^{(r)} - f^{(r)})² = ∫(f_n^{(r)})² - 2∫f_n^{(r)} f^{(r)} + R(f^{(r)})`.
fn replicate_ise(model: &CharModel, sample: &Sample, h: f64, r: u32, rough: f64) -> f64 {
    self_energy(sample, h, r) - 2.0 * cross_energy(model, sample, h, r) + rough
}

/// `∫(f_n^{(r)})²` summed exactly over pairs of observations:
/// `(1/(πn²)) δ^{2r+1} Σ_{j,k} ∫_0^1 s^{2r} cos(s δ (X_j - X_k)) ds`.
pub(crate) fn self_energy(sample: &Sample, h: f64, r: u32) -> f64 {
    let delta = 1.0 / h;
    let x = sample.values();
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let diag = x.len() as f64 / (2 * r + 1) as f64;
    let mut off = 0.0;
    for (j, &xj) in x.iter().enumerate() {
        for &xk in &x[j + 1..] {
            off += sign * sinc_fn_derivative(2 * r, delta * (xj - xk));
        }
    }
    let n = x.len() as f64;
    delta.powi(2 * r as i32 + 1) * (diag + 2.0 * off) / (PI * n * n)
}

/// `∫f_n^{(r)} f^{(r)} = (1/n) Σ_j G(X_j)` with
/// `G(y) = (1/π)∫_0^{1/h} t^{2r} φ(t) cos(ty) dt`, the `r`-th derivative of
/// the target smoothed by the sinc kernel, evaluated at each observation.
fn cross_energy(model: &CharModel, sample: &Sample, h: f64, r: u32) -> f64 {
    let delta = 1.0 / h;
    let sum: f64 = sample
        .values()
        .iter()
        .map(|&y| {
            let g = |t: f64| t.powi(2 * r as i32) * model.cf(t).unwrap_or(0.0) * (t * y).cos();
            // a quarter period of cos(ty) per panel at most
            let width = delta.min(0.5 * PI / y.abs().max(1e-300));
            integrate_panels(g, 0.0, delta, width, 1e-13).value
        })
        .sum();
    sum / (PI * sample.len() as f64)
}

use super::*;
use crate::charfn::{head_energy, roughness};
use proptest::prelude::*;

fn normal1() -> CharModel {
    CharModel::normal(1.0).unwrap()
}

fn cauchy1() -> CharModel {
    CharModel::cauchy(1.0).unwrap()
}

#[test]
fn table_examples() {
    let m = sinc_mise(&normal1(), 1000, 0.38046, 0).unwrap();
    assert!((m.total - 0.000611).abs() < 5e-7, "{}", m.total);
    let h = 2.0 / 1001f64.ln();
    let m = sinc_mise(&cauchy1(), 1000, h, 0).unwrap();
    assert!((m.total - 0.0011).abs() < 5e-5, "{}", m.total);
}

#[test]
fn band_limited_is_unbiased_at_cutoff() {
    let t = 2.0;
    let model = CharModel::fejer(t).unwrap();
    for r in 0..4 {
        let m = sinc_mise(&model, 50, 1.0 / t, r).unwrap();
        assert_eq!(m.bias_sq, 0.0);
        assert!(m.variance <= t.powi(2 * r as i32 + 1) / (PI * 50.0));
    }
}

#[test]
fn head_form_matches() {
    for model in [normal1(), cauchy1(), CharModel::normal(0.3).unwrap()] {
        for &(n, h) in &[(10, 0.05), (100, 0.4), (5000, 1.7), (1, 2.0)] {
            let a = sinc_mise(&model, n, h, 0).unwrap().total;
            let b = sinc_mise_head_form(&model, n, h).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
    }
}

#[test]
fn derivative_mise_by_direct_integration() {
    // bias and variance integrands written out independently
    let model = normal1();
    let (n, h, r) = (200u64, 0.5, 2u32);
    let d = 1.0 / h;
    let bias = crate::quadrature::integrate_to_infinity(|t| t.powi(4) * (-t * t).exp(), d, 1.0, 1e-15).value / PI;
    let var = crate::quadrature::integrate(|t| t.powi(4) * (1.0 - (-t * t).exp()), 0.0, d, 1e-15, 1e-15).value
        / (PI * n as f64);
    let m = sinc_mise(&model, n, h, r).unwrap();
    assert!((m.bias_sq - bias).abs() < 1e-12);
    assert!((m.variance - var).abs() < 1e-12);
}

#[test]
fn power_tail_derivative_is_rejected() {
    let pt = CharModel::power_tail(1.0, 1.0, 4.0).unwrap();
    assert!(sinc_mise(&pt, 10, 0.5, 1).is_ok());
    let pt = CharModel::power_tail(1.0, 1.0, 5.0).unwrap();
    assert!(matches!(sinc_mise(&pt, 10, 0.5, 2), Err(Error::Infeasible(_))));
}

#[test]
fn conventional_examples() {
    // The printed optima come from a bandwidth grid of step 0.01; the
    // continuous optimum sits slightly lower.
    let normal = |h| conventional_mise(&KernelSpectrum::NormalKernel, &normal1(), 100, h);
    let (_, grid) = minimize_mise_on_grid(normal, 0.01, 10.0, 0.01).unwrap();
    let (_, cont) = minimize_mise_over_h(normal, 1e-3, 10.0).unwrap();
    assert!((grid.total - 0.005411).abs() < 5e-7, "{}", grid.total);
    assert!(cont.total <= grid.total && grid.total - cont.total < 2e-6);
    let cauchy = |h| conventional_mise(&KernelSpectrum::CauchyKernel, &cauchy1(), 100, h);
    let (_, grid) = minimize_mise_on_grid(cauchy, 0.01, 10.0, 0.01).unwrap();
    let (_, cont) = minimize_mise_over_h(cauchy, 1e-3, 10.0).unwrap();
    assert!((grid.total - 0.00863).abs() < 5e-6, "{}", grid.total);
    assert!(cont.total <= grid.total);
}

#[test]
fn sinc_kernel_spectrum_matches_sinc_mise() {
    for model in [normal1(), cauchy1(), CharModel::uniform_power(3).unwrap()] {
        for &h in &[0.1, 0.5, 1.3] {
            let a = conventional_mise(&KernelSpectrum::Sinc, &model, 77, h).unwrap();
            let b = conventional_mise_quadrature(&KernelSpectrum::Sinc, &model, 77, h).unwrap();
            let c = sinc_mise(&model, 77, h, 0).unwrap();
            assert!((a.total - c.total).abs() < 1e-10);
            assert!((b.total - c.total).abs() < 1e-10, "{model:?} {h}: {} {}", b.total, c.total);
        }
    }
}

#[test]
fn conventional_closed_forms_match_quadrature() {
    for &h in &[0.05, 0.3, 1.0, 3.0] {
        for (kernel, model) in [
            (KernelSpectrum::NormalKernel, normal1()),
            (KernelSpectrum::NormalKernel, CharModel::normal(2.5).unwrap()),
            (KernelSpectrum::CauchyKernel, cauchy1()),
            (KernelSpectrum::CauchyKernel, CharModel::cauchy(0.4).unwrap()),
        ] {
            let a = conventional_mise(&kernel, &model, 100, h).unwrap();
            let b = conventional_mise_quadrature(&kernel, &model, 100, h).unwrap();
            assert!((a.bias_sq - b.bias_sq).abs() < 1e-11, "{kernel:?} {model:?} {h}");
            assert!((a.variance - b.variance).abs() < 1e-11, "{kernel:?} {model:?} {h}");
        }
    }
}

#[test]
fn minimize_examples() {
    let (h, best) = minimize_mise_over_h(|h| sinc_mise(&normal1(), 1000, h, 0), 0.05, 2.0).unwrap();
    let oracle = 1.0 / 1001f64.ln().sqrt();
    assert!((h - oracle).abs() < 1e-6, "{h} vs {oracle}");
    assert!((best.total - 0.000611).abs() < 5e-7);

    let cauchy = |h| sinc_mise(&cauchy1(), 100, h, 0);
    let (_, cont) = minimize_mise_over_h(cauchy, 1e-3, 10.0).unwrap();
    let (_, grid) = minimize_mise_on_grid(cauchy, 0.01, 10.0, 0.01).unwrap();
    assert!((grid.total - 0.007346).abs() < 5e-7, "{}", grid.total);
    assert!(cont.total <= grid.total && (cont.total - 0.007346).abs() < 2e-6);

    let (h, _) = minimize_mise_over_h(|h| Ok(MiseBreakdown::new(1.0, 0.0, h, 1, 0)), 0.2, 3.0).unwrap();
    assert_eq!(h, 0.2);

    let failing = minimize_mise_over_h(|_| Err(Error::infeasible("x")), 0.2, 3.0);
    assert!(failing.is_err());
}

#[test]
fn grid_minimiser_uses_exact_steps() {
    let (h, _) = minimize_mise_on_grid(|h| Ok(MiseBreakdown::new((h - 0.38).abs(), 0.0, h, 1, 0)), 0.01, 10.0, 0.01)
        .unwrap();
    assert_eq!(h, 0.38);
}

#[test]
fn monotone_components() {
    for model in [normal1(), cauchy1(), CharModel::uniform_power(2).unwrap()] {
        let mut prev: Option<MiseBreakdown> = None;
        for i in 0..100 {
            let h = 0.02 + 0.03 * i as f64;
            let m = sinc_mise(&model, 500, h, 0).unwrap();
            assert!(m.variance < 1.0 / (PI * 500.0 * h));
            if let Some(p) = prev {
                assert!(m.bias_sq >= p.bias_sq - 1e-15, "{model:?} h={h}");
                assert!(m.variance <= p.variance + 1e-15, "{model:?} h={h}");
            }
            prev = Some(m);
        }
    }
}

proptest! {
    #[test]
    fn breakdown_consistency(n in 10u64..10_000, h in 0.05f64..2.0, cauchy in any::<bool>()) {
        let model = if cauchy { cauchy1() } else { normal1() };
        let closed = sinc_mise(&model, n, h, 0).unwrap();
        prop_assert!((closed.total - closed.bias_sq - closed.variance).abs() <= 1e-14 * closed.total);
        let head_form = 1.0 / (PI * n as f64 * h) + roughness(&model, 0).unwrap().value
            - (1.0 + 1.0 / n as f64) * head_energy(&model, 1.0 / h).unwrap().value;
        prop_assert!((closed.total - head_form).abs() < 1e-10);
        let quad = sinc_mise_quadrature(&model, n, h, 0).unwrap();
        prop_assert!((closed.total - quad.total).abs() < 1e-9);
    }
}

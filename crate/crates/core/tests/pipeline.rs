use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sinc_core::bandwidth::{normal_rule, solve_opt_bandwidth_known_cf};
use sinc_core::bounds::bound_smooth;
use sinc_core::charfn::{roughness, CharModel};
use sinc_core::ecf::Sample;
use sinc_core::estimator::{evaluate_on_grid, SincEstimate};
use sinc_core::mise::{
    conventional_mise, mc_ise_oracle, minimize_mise_over_h, sinc_mise, sinc_mise_quadrature, KernelSpectrum,
};

// Reference closed forms for the Cauchy target with sinc and Cauchy kernels.
fn cauchy_sinc_reference(n: f64, h: f64) -> f64 {
    (0.5 * (1.0 + 1.0 / n) * (-2.0 / h).exp() + (1.0 / h - 0.5) / n) / PI
}

fn cauchy_kernel_reference(n: f64, h: f64) -> f64 {
    (0.5 - 2.0 / (2.0 + h) + 1.0 / (2.0 * (1.0 + h)) + 1.0 / (2.0 * n * h) - 1.0 / (2.0 * n * (1.0 + h))) / PI
}

fn normal_kernel_reference(n: f64, h: f64) -> f64 {
    (1.0 - 2.0 * (2.0 / (2.0 + h * h)).sqrt() + 1.0 / (1.0 + h * h).sqrt() + 1.0 / (n * h)
        - 1.0 / (n * (1.0 + h * h).sqrt()))
        / (2.0 * PI.sqrt())
}

#[test]
fn mise_matches_reference_closed_forms() {
    let normal = CharModel::normal(1.0).unwrap();
    let cauchy = CharModel::cauchy(1.0).unwrap();
    for n in [10u64, 40, 100, 1000, 100_000] {
        for h in [0.05, 0.2, 0.45, 1.0, 3.0] {
            let nf = n as f64;
            let got = sinc_mise(&cauchy, n, h, 0).unwrap().total;
            assert!((got - cauchy_sinc_reference(nf, h)).abs() < 1e-15, "n={n} h={h}");
            let got = conventional_mise(&KernelSpectrum::CauchyKernel, &cauchy, n, h).unwrap().total;
            assert!((got - cauchy_kernel_reference(nf, h)).abs() < 1e-15, "n={n} h={h}");
            let got = conventional_mise(&KernelSpectrum::NormalKernel, &normal, n, h).unwrap().total;
            assert!((got - normal_kernel_reference(nf, h)).abs() < 1e-14, "n={n} h={h}");
        }
    }
}

#[test]
fn down_crossing_rule_finds_the_continuous_optimum() {
    for model in [CharModel::normal(1.0).unwrap(), CharModel::cauchy(1.0).unwrap()] {
        for n in [20u64, 100, 1000, 10_000] {
            let sel = solve_opt_bandwidth_known_cf(&model, n).unwrap();
            let (h, best) = minimize_mise_over_h(|h| sinc_mise(&model, n, h, 0), 1e-3, 10.0).unwrap();
            assert!((sel.chosen_h - h).abs() < 1e-5 * h, "{model:?} n={n}: {} vs {h}", sel.chosen_h);
            let at_rule = sinc_mise(&model, n, sel.chosen_h, 0).unwrap().total;
            assert!(at_rule <= best.total * (1.0 + 1e-12));
        }
    }
}

#[test]
fn estimate_from_sampled_data_is_close_in_l2() {
    let model = CharModel::normal(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let sample = Sample::new(model.sample(2000, &mut rng).unwrap()).unwrap();
    let h = normal_rule(&sample).unwrap().chosen_h;
    let est = SincEstimate::new(&sample, h, 0).unwrap();
    let grid = evaluate_on_grid(&est, -8.0, 8.0, 1601).unwrap();
    let dx = 0.01;
    let ise: f64 = grid
        .x_values
        .iter()
        .zip(&grid.y_values)
        .map(|(&x, &y)| (y - model.density_derivative(0, x).unwrap()).powi(2) * dx)
        .sum();
    let mise = sinc_mise(&model, 2000, h, 0).unwrap().total;
    // one realisation; the ISE spread around the MISE is of the same order
    assert!(ise < 5.0 * mise, "ISE {ise} vs MISE {mise}");
    let mass: f64 = grid.y_values.iter().sum::<f64>() * dx;
    assert!((mass - 1.0).abs() < 0.02, "{mass}");
}

#[test]
fn monte_carlo_tracks_exact_mise_for_heavy_tails_and_derivatives() {
    let cauchy = CharModel::cauchy(1.0).unwrap();
    for (n, h, r) in [(50u64, 0.5, 0u32), (200, 0.6, 1)] {
        let exact = sinc_mise(&cauchy, n, h, r).unwrap().total;
        let mc = mc_ise_oracle(&cauchy, n, h, r, 400, 7).unwrap();
        let z = (mc.mean_ise - exact) / mc.std_error.unwrap();
        assert!(z.abs() < 4.0, "n={n} r={r}: z = {z}");
    }
}

#[test]
fn optimized_smooth_bound_is_a_local_minimum() {
    let model = CharModel::normal(1.0).unwrap();
    for m in 1..=3 {
        let rf = roughness(&model, m).unwrap().value;
        let opt = bound_smooth(0, m, rf, 500, None).unwrap();
        for f in [0.98, 1.02] {
            let near = bound_smooth(0, m, rf, 500, Some(opt.h_used * f)).unwrap().bound;
            assert!(near > opt.bound);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_and_closed_form_agree(
        sigma in 0.3f64..3.0,
        scale in 0.3f64..3.0,
        n in 1u64..100_000,
        h in 0.05f64..3.0,
        r in 0u32..3,
    ) {
        for model in [CharModel::normal(sigma).unwrap(), CharModel::cauchy(scale).unwrap()] {
            let a = sinc_mise(&model, n, h, r).unwrap();
            let b = sinc_mise_quadrature(&model, n, h, r).unwrap();
            let tol = 1e-9 * a.total.max(1.0);
            prop_assert!((a.bias_sq - b.bias_sq).abs() <= tol);
            prop_assert!((a.variance - b.variance).abs() <= tol);
        }
    }

    #[test]
    fn larger_samples_never_hurt(sigma in 0.3f64..3.0, n in 1u64..10_000, h in 0.05f64..3.0) {
        let model = CharModel::normal(sigma).unwrap();
        let small = sinc_mise(&model, n, h, 0).unwrap();
        let large = sinc_mise(&model, n + 1, h, 0).unwrap();
        prop_assert!(large.total <= small.total);
        prop_assert_eq!(large.bias_sq, small.bias_sq);
    }
}

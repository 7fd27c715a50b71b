use std::f64::consts::PI;

use proptest::prelude::*;
use qba_core::numerics::{
    convolve_circular, max_abs_diff, relative_l2_error, wrapped_chirp_kernel,
};
use qba_core::qba::{random_unit_vector, trial_rng};
use qba_core::{
    build_plan, dft_direct, gate_counts, qba_circuit, run_qba, run_qba_dense, Complex64,
    ComplexVec, RunOptions, StateVector,
};

/// Linear convolution of a chirped input with `e^{+iπ(k-j)²/n}` written out
/// with signed differences, no wrapping involved.
fn linear_chirp_convolution(a: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            a.iter()
                .enumerate()
                .map(|(j, &aj)| {
                    let d = k as f64 - j as f64;
                    aj * Complex64::from_polar(1.0, PI * d * d / n as f64)
                })
                .sum()
        })
        .collect()
}

#[test]
fn exactness_for_n_up_to_32() {
    for n in 1..=32 {
        let plan = build_plan(n).unwrap();
        for trial in 0..10 {
            let x = random_unit_vector(n, &mut trial_rng(2024, n, trial));
            let res = run_qba(&x, &plan, RunOptions::default()).unwrap();
            let y = dft_direct(&x).unwrap();
            // unnormalized amplitudes scaled by α‖x‖ recover the DFT
            let scaled: Vec<_> = res.branch[..n]
                .iter()
                .map(|a| a * (plan.alpha * res.input_norm))
                .collect();
            assert!(max_abs_diff(&scaled, &y) < 1e-9, "n = {n}");
            assert_eq!(scaled, res.y);
        }
    }
}

#[test]
fn success_probability_identity() {
    for n in 2..=32 {
        let plan = build_plan(n).unwrap();
        let expected = n as f64 / (plan.alpha * plan.alpha);
        for trial in 0..3 {
            let x = random_unit_vector(n, &mut trial_rng(5, n, trial));
            let res = run_qba(&x, &plan, RunOptions::default()).unwrap();
            assert!((res.logical_mass - expected).abs() < 1e-8, "n = {n}");
            assert!(res.success_probability >= expected - 1e-8);
            assert!(res.success_probability <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn circular_convolution_equals_linear_on_logical_indices() {
    for n in 1..=24 {
        let plan = build_plan(n).unwrap();
        let x = random_unit_vector(n, &mut trial_rng(77, n, 0));
        let mut a = vec![Complex64::new(0.0, 0.0); plan.big_m];
        for j in 0..n {
            a[j] = x[j] * Complex64::from_polar(1.0, -PI * (j * j) as f64 / n as f64);
        }
        let kernel = wrapped_chirp_kernel(n, plan.big_m).unwrap();
        let circ = convolve_circular(&a, &kernel).unwrap();
        let lin = linear_chirp_convolution(&a[..n], n);
        assert!(max_abs_diff(&circ[..n], &lin) < 1e-10, "n = {n}");
    }
}

#[test]
fn plan_kernel_is_wrapped_chirp() {
    for n in 1..=20 {
        let p = build_plan(n).unwrap();
        assert!(p.big_m >= 2 * n - 1 && (p.big_m / 2 < 2 * n - 1 || p.m == 1));
        for t in 0..p.big_m {
            let want = if t < n {
                Complex64::from_polar(1.0, PI * (t * t) as f64 / n as f64)
            } else if p.big_m - t < n {
                let s = p.big_m - t;
                Complex64::from_polar(1.0, PI * (s * s) as f64 / n as f64)
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((p.kernel_b[t] - want).norm() < 1e-12, "n = {n}, t = {t}");
        }
    }
}

#[test]
fn elementary_gate_count_is_quadratic_in_m() {
    for n in 1..=300 {
        let plan = build_plan(n).unwrap();
        let m = plan.m;
        let counts = gate_counts(&qba_circuit(&plan).unwrap());
        assert_eq!(
            counts.elementary,
            2 * (m * (m + 1) / 2) + 2 * (m + m * (m - 1) / 2 + m / 2)
        );
        assert_eq!(counts.multiplexed, 1);
    }
}

#[test]
fn gate_and_dense_paths_agree() {
    for n in [1, 2, 3, 5, 6, 7, 12] {
        let plan = build_plan(n).unwrap();
        let x = random_unit_vector(n, &mut trial_rng(8, n, 0));
        let g = run_qba(&x, &plan, RunOptions::default()).unwrap();
        let d = run_qba_dense(&x, &plan).unwrap();
        assert!(max_abs_diff(&g.branch, &d.branch) < 1e-10, "n = {n}");
        assert!((g.success_probability - d.success_probability).abs() < 1e-10);
    }
}

#[test]
fn dense_n5_matches_oracle() {
    let plan = build_plan(5).unwrap();
    let x = random_unit_vector(5, &mut trial_rng(55, 5, 0));
    let d = run_qba_dense(&x, &plan).unwrap();
    assert!(d.max_abs_error_vs_oracle.unwrap() < 1e-9);
}

#[test]
fn norm_drift_over_full_circuit() {
    for n in [3, 11, 40] {
        let plan = build_plan(n).unwrap();
        let x = random_unit_vector(n, &mut trial_rng(1, n, 0));
        let (mut s, _) = StateVector::init_amplitudes(plan.width(), &x).unwrap();
        s.apply_circuit(&qba_circuit(&plan).unwrap()).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn power_of_two_lengths_go_through_the_same_path() {
    for n in [2, 4, 8, 16, 32, 64] {
        let plan = build_plan(n).unwrap();
        let x = random_unit_vector(n, &mut trial_rng(2, n, 0));
        let res = run_qba(&x, &plan, RunOptions::default()).unwrap();
        assert!(relative_l2_error(&res.y, &dft_direct(&x).unwrap()) < 1e-9);
    }
}

#[test]
fn larger_lengths_stay_exact() {
    for n in [100, 257, 500] {
        let plan = build_plan(n).unwrap();
        let x = random_unit_vector(n, &mut trial_rng(3, n, 0));
        let res = run_qba(&x, &plan, RunOptions::default()).unwrap();
        let err = relative_l2_error(&res.y, &dft_direct(&x).unwrap());
        assert!(err < 1e-9, "n = {n}: {err:e}");
    }
}

proptest! {
    // The three quadratic exponents combine to the DFT kernel:
    // -k² - j² + (k-j)² = -2jk, checked in exact integer arithmetic.
    #[test]
    fn chirp_exponents_cancel(j in -100_000i64..100_000, k in -100_000i64..100_000) {
        prop_assert_eq!(-k * k - j * j + (k - j) * (k - j), -2 * j * k);
    }

    #[test]
    fn exactness_random_inputs(n in 1usize..=32, seed in any::<u64>()) {
        let plan = build_plan(n).unwrap();
        let x = random_unit_vector(n, &mut trial_rng(seed, n, 0));
        let res = run_qba(&x, &plan, RunOptions { verify: true, ..Default::default() }).unwrap();
        prop_assert!(res.max_abs_error_vs_oracle.unwrap() < 1e-9);
    }

    #[test]
    fn unnormalized_inputs_are_rescaled(n in 1usize..=16, scale in 1e-3..1e3f64, seed in any::<u64>()) {
        let plan = build_plan(n).unwrap();
        let unit = random_unit_vector(n, &mut trial_rng(seed, n, 0));
        let x = ComplexVec::new(unit.iter().map(|z| z * scale).collect()).unwrap();
        let res = run_qba(&x, &plan, RunOptions::default()).unwrap();
        let y = dft_direct(&x).unwrap();
        prop_assert!(relative_l2_error(&res.y, &y) < 1e-9);
    }
}

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use qba_core::circuits::{qft_gate_count, quadratic_phase_gate_count};
use qba_core::qba::{random_unit_vector, trial_rng};
use qba_core::{
    circuit_to_matrix, gate_counts, gate_matrix, qft_circuit, quadratic_phase_circuit, Circuit,
    Complex64, ComplexVec, Gate, StateVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let id = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
    (u * u.adjoint() - id)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `(1/√M) e^{∓2πi jk/M}` written out entry by entry.
fn analytic_dft_matrix(m: usize, inverse: bool) -> DMatrix<Complex64> {
    let dim = 1usize << m;
    let sign = if inverse { 1.0 } else { -1.0 };
    let scale = 1.0 / (dim as f64).sqrt();
    DMatrix::from_fn(dim, dim, |k, j| {
        Complex64::from_polar(scale, sign * 2.0 * PI * ((j * k) % dim) as f64 / dim as f64)
    })
}

fn random_admissible_betas(len: usize, rng: &mut impl Rng) -> ComplexVec {
    let v = (0..len)
        .map(|_| Complex64::from_polar(rng.random_range(0.0..=1.0), rng.random_range(-PI..PI)))
        .collect();
    ComplexVec::new(v).unwrap()
}

#[test]
fn qft_matches_analytic_matrix() {
    for m in 1..=5 {
        for inverse in [false, true] {
            let u = circuit_to_matrix(&qft_circuit(m, inverse).unwrap()).unwrap();
            let err = (u - analytic_dft_matrix(m, inverse))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "m = {m}, inverse = {inverse}: {err:e}");
        }
    }
}

#[test]
fn qft_then_inverse_is_identity() {
    for m in 1..=5 {
        let f = circuit_to_matrix(&qft_circuit(m, false).unwrap()).unwrap();
        let fi = circuit_to_matrix(&qft_circuit(m, true).unwrap()).unwrap();
        let dim = 1 << m;
        let err = (&fi * &f - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
        assert!((&f * &fi - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .all(|z| z.norm() < 1e-12));
    }
}

#[test]
fn quadratic_phase_m4_is_e_minus_i_pi_j2_over_6() {
    let c = quadratic_phase_circuit(4, -PI / 6.0).unwrap();
    assert_eq!(c.len(), 10);
    let u = circuit_to_matrix(&c).unwrap();
    for r in 0..16 {
        for col in 0..16 {
            let want = if r == col {
                Complex64::from_polar(1.0, -PI * (r * r) as f64 / 6.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((u[(r, col)] - want).norm() < 1e-12);
        }
    }
}

#[test]
fn gate_count_formulas_hold_up_to_16_qubits() {
    for m in 1..=16 {
        let q = gate_counts(&qft_circuit(m, false).unwrap());
        assert_eq!(q.total, m + m * (m - 1) / 2 + m / 2);
        assert_eq!(
            (q.hadamard, q.controlled_phase, q.swap),
            (m, m * (m - 1) / 2, m / 2)
        );
        assert_eq!(q.total, qft_gate_count(m));
        let d = gate_counts(&quadratic_phase_circuit(m, 0.3).unwrap());
        assert_eq!(d.total, m * (m + 1) / 2);
        assert_eq!((d.phase, d.controlled_phase), (m, m * (m - 1) / 2));
        assert_eq!(d.total, quadratic_phase_gate_count(m));
    }
}

#[test]
fn multiplexed_rotation_is_unitary_for_random_betas() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for width in 2..=5 {
        for ancilla in 0..width {
            let betas = random_admissible_betas(1 << (width - 1), &mut rng);
            let u = gate_matrix(&Gate::multiplexed_rotation(betas, ancilla), width).unwrap();
            assert!(unitarity_defect(&u) < 1e-12);
        }
    }
}

#[test]
fn multiplexed_rotation_first_column_is_the_encoding() {
    // |k⟩|0⟩ ↦ |k⟩(β_k|0⟩ + sqrt(1-|β_k|²)|1⟩), ancilla on top
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let betas = random_admissible_betas(4, &mut rng);
    for k in 0..4 {
        let mut s = StateVector::init_basis(3, k).unwrap();
        s.apply_multiplexed_ancilla_rotation(&betas, 2).unwrap();
        let a = s.amplitudes();
        assert!((a[k] - betas[k]).norm() < 1e-15);
        let gamma = (1.0 - betas[k].norm_sqr()).sqrt();
        assert!((a[k + 4] - Complex64::new(gamma, 0.0)).norm() < 1e-15);
    }
}

fn arb_gate(width: usize) -> impl Strategy<Value = Gate> {
    let q = 0..width;
    prop_oneof![
        q.clone().prop_map(Gate::hadamard),
        (q.clone(), -10.0..10.0f64).prop_map(|(t, a)| Gate::phase(t, a)),
        (q.clone(), q.clone(), -10.0..10.0f64)
            .prop_filter("distinct", |(c, t, _)| c != t)
            .prop_map(|(c, t, a)| Gate::controlled_phase(c, t, a)),
        (q.clone(), q.clone())
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Gate::swap(a, b)),
        (q, any::<u64>()).prop_map(move |(anc, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Gate::multiplexed_rotation(random_admissible_betas(1 << (width - 1), &mut rng), anc)
        }),
    ]
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (2usize..=5).prop_flat_map(|w| {
        prop::collection::vec(arb_gate(w), 0..24).prop_map(move |gates| {
            let mut c = Circuit::new(w).unwrap();
            for g in gates {
                c.push(g).unwrap();
            }
            c
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_gate_is_unitary(w in 2usize..=5, g in (2usize..=5).prop_flat_map(arb_gate)) {
        prop_assume!(g.validate(w).is_ok());
        let u = gate_matrix(&g, w).unwrap();
        prop_assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn quadratic_phase_is_exact_diagonal(m in 1usize..=5, theta in -4.0..4.0f64) {
        let u = circuit_to_matrix(&quadratic_phase_circuit(m, theta).unwrap()).unwrap();
        let dim = 1usize << m;
        for r in 0..dim {
            for c in 0..dim {
                let want = if r == c {
                    Complex64::from_polar(1.0, theta * (r * r) as f64)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                prop_assert!((u[(r, c)] - want).norm() < 1e-12);
            }
        }
        prop_assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn simulator_agrees_with_dense_matrix(c in arb_circuit(), seed in any::<u64>()) {
        let dim = 1usize << c.width();
        let x = random_unit_vector(dim, &mut trial_rng(seed, dim, 0));
        let (mut s, _) = StateVector::init_amplitudes(c.width(), &x).unwrap();
        s.apply_circuit(&c).unwrap();
        let dense = circuit_to_matrix(&c).unwrap() * DVector::from_column_slice(&x);
        let err = s.amplitudes().iter().zip(dense.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-11);
        prop_assert!((s.norm() - 1.0).abs() < 1e-12 * (c.len() as f64 + 1.0));
    }

    #[test]
    fn json_round_trip(c in arb_circuit()) {
        let back: Circuit = serde_json::from_str(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }
}

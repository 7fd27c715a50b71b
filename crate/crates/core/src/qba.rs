//! The quantum Bluestein pipeline.
//!
//! An `N`-point DFT is carried out on `m + 1` qubits, where `M = 2^m` is the
//! smallest power of two with `M >= 2N - 1` and the extra qubit (the most
//! significant one) flags the block-encoded convolution:
//!
//! 1. chirp `|j⟩ → e^{-iπ j²/N}|j⟩`
//! 2. forward QFT on the main register
//! 3. multiplexed ancilla rotation encoding `b̃_k / α`
//! 4. inverse QFT
//! 5. de-chirp `|k⟩ → e^{-iπ k²/N}|k⟩`
//!
//! followed by post-selection of the ancilla on `|0⟩`. Here `b̃` is the
//! unnormalized forward DFT of the wrapped kernel `e^{+iπ t²/N}` and `α` is
//! its largest modulus.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::{
    chirp_circuit, circuit_to_matrix, gate_counts, qft_circuit, Circuit, Gate, GateCounts,
};
use crate::error::{QbaError, Result};
use crate::numerics::{
    bluestein_length, chirp_phase, dft_direct, fft_radix2, max_abs_diff, relative_l2_error,
    wrapped_chirp_kernel, ComplexVec,
};
use crate::simulator::StateVector;

/// Largest main register accepted by [`run_qba_dense`].
pub const DENSE_MAX_MAIN_QUBITS: usize = 10;

/// Precomputed data for one transform length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BluesteinPlan {
    pub n: usize,
    /// Main-register qubits.
    pub m: usize,
    /// Workspace size `2^m`.
    pub big_m: usize,
    /// Wrapped chirp kernel of length `big_m`.
    pub kernel_b: ComplexVec,
    /// Unnormalized forward DFT of `kernel_b`.
    pub fourier_b: ComplexVec,
    /// `max_k |fourier_b[k]|`.
    pub alpha: f64,
}

/// Builds the plan for an `n`-point transform. A one-point transform still
/// gets a one-qubit register.
pub fn build_plan(n: usize) -> Result<BluesteinPlan> {
    if n == 0 {
        return Err(QbaError::Argument(
            "transform length must be at least 1".into(),
        ));
    }
    let big_m = bluestein_length(n).max(2);
    let m = big_m.trailing_zeros() as usize;
    let kernel = wrapped_chirp_kernel(n, big_m)?;
    let fourier = fft_radix2(&kernel, false)?;
    let alpha = fourier.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(BluesteinPlan {
        n,
        m,
        big_m,
        kernel_b: ComplexVec::new(kernel)?,
        fourier_b: ComplexVec::new(fourier)?,
        alpha,
    })
}

impl BluesteinPlan {
    /// Rotation amplitudes `b̃_k / α`.
    pub fn betas(&self) -> ComplexVec {
        let v = self.fourier_b.iter().map(|b| b / self.alpha).collect();
        ComplexVec::new(v).expect("scaled kernel spectrum stays finite")
    }

    pub fn width(&self) -> usize {
        self.m + 1
    }

    pub fn ancilla(&self) -> usize {
        self.m
    }

    /// `e^{-iπ j²/n}` for every main-register index.
    pub fn chirp_diagonal(&self) -> Vec<Complex64> {
        (0..self.big_m)
            .map(|j| chirp_phase(self.n, j, -1.0))
            .collect()
    }

    /// Gate-level chirp on the main register (also used for the de-chirp).
    pub fn chirp_circuit(&self) -> Result<Circuit> {
        chirp_circuit(self.m, self.n, -1.0)
    }

    /// Gate counts that follow from the closed-form component sizes:
    /// two quadratic-phase diagonals and two QFTs.
    pub fn expected_elementary_gates(&self) -> usize {
        let m = self.m;
        2 * crate::circuits::quadratic_phase_gate_count(m) + 2 * crate::circuits::qft_gate_count(m)
    }
}

/// The full five-stage circuit on `m + 1` qubits.
pub fn qba_circuit(plan: &BluesteinPlan) -> Result<Circuit> {
    let mut c = Circuit::new(plan.width())?;
    let chirp = plan.chirp_circuit()?;
    c.extend_from(&chirp)?;
    c.extend_from(&qft_circuit(plan.m, false)?)?;
    c.push(Gate::multiplexed_rotation(plan.betas(), plan.ancilla()))?;
    c.extend_from(&qft_circuit(plan.m, true)?)?;
    c.extend_from(&chirp)?;
    Ok(c)
}

/// How the two chirp diagonals are applied by [`run_qba`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalPath {
    /// Phase / controlled-phase gates from the bit expansion of `j²`.
    #[default]
    Gates,
    /// A single reference diagonal multiplication.
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub diagonal_path: DiagonalPath,
    /// Compare against [`dft_direct`] and fill `max_abs_error_vs_oracle`.
    pub verify: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QbaResult {
    pub n: usize,
    pub m: usize,
    pub big_m: usize,
    pub alpha: f64,
    /// `‖x‖` of the raw input.
    pub input_norm: f64,
    /// Recovered spectrum `α·‖x‖·branch[k]`, `k < n`; equals the unnormalized DFT.
    pub y: Vec<Complex64>,
    /// Probability of the ancilla reading `0`.
    pub success_probability: f64,
    /// Part of `success_probability` that lands on `k < n`.
    pub logical_mass: f64,
    /// Measurement distribution over `k < n`, conditioned on success and on
    /// landing in the logical subspace.
    pub logical_probabilities: Vec<f64>,
    pub gate_report: GateCounts,
    pub max_abs_error_vs_oracle: Option<f64>,
    /// Unnormalized ancilla-`0` branch over all `M` main-register indices.
    pub branch: Vec<Complex64>,
}

impl QbaResult {
    /// Logical amplitudes renormalized to unit norm.
    pub fn logical_state(&self) -> Vec<Complex64> {
        let scale = self.logical_mass.sqrt();
        self.branch[..self.n].iter().map(|a| a / scale).collect()
    }

    /// Amplitudes left on `k >= n`; never part of the answer.
    pub fn garbage(&self) -> &[Complex64] {
        &self.branch[self.n..]
    }
}

fn check_input(x: &ComplexVec, plan: &BluesteinPlan) -> Result<()> {
    if x.len() != plan.n {
        return Err(QbaError::Size(format!(
            "input has {} entries but the plan is for n = {}",
            x.len(),
            plan.n
        )));
    }
    Ok(())
}

fn finish(
    x: &ComplexVec,
    plan: &BluesteinPlan,
    input_norm: f64,
    branch: Vec<Complex64>,
    success_probability: f64,
    verify: bool,
) -> Result<QbaResult> {
    let n = plan.n;
    let logical_mass: f64 = branch[..n].iter().map(|a| a.norm_sqr()).sum();
    let logical_probabilities = if logical_mass > 0.0 {
        branch[..n]
            .iter()
            .map(|a| a.norm_sqr() / logical_mass)
            .collect()
    } else {
        vec![0.0; n]
    };
    let scale = plan.alpha * input_norm;
    let y: Vec<Complex64> = branch[..n].iter().map(|a| a * scale).collect();
    let max_abs_error_vs_oracle = if verify {
        Some(max_abs_diff(&y, &dft_direct(x)?))
    } else {
        None
    };
    Ok(QbaResult {
        n,
        m: plan.m,
        big_m: plan.big_m,
        alpha: plan.alpha,
        input_norm,
        y,
        success_probability,
        logical_mass,
        logical_probabilities,
        gate_report: gate_counts(&qba_circuit(plan)?),
        max_abs_error_vs_oracle,
        branch,
    })
}

/// Runs the pipeline gate by gate on the state-vector simulator.
pub fn run_qba(x: &ComplexVec, plan: &BluesteinPlan, options: RunOptions) -> Result<QbaResult> {
    check_input(x, plan)?;
    let (mut state, input_norm) = StateVector::init_amplitudes(plan.width(), x)?;

    let chirp_gates = plan.chirp_circuit()?;
    let chirp_diag: Vec<Complex64> = {
        // ancilla is the top bit, so the diagonal repeats over both halves
        let d = plan.chirp_diagonal();
        d.iter().chain(d.iter()).copied().collect()
    };
    let chirp = |s: &mut StateVector| match options.diagonal_path {
        DiagonalPath::Gates => s.apply_circuit(&chirp_gates),
        DiagonalPath::Reference => s.apply_diagonal(&chirp_diag),
    };

    chirp(&mut state)?;
    state.apply_circuit(&qft_circuit(plan.m, false)?)?;
    state.apply_multiplexed_ancilla_rotation(&plan.betas(), plan.ancilla())?;
    state.apply_circuit(&qft_circuit(plan.m, true)?)?;
    chirp(&mut state)?;

    let ps = state.postselect(plan.ancilla(), false)?;
    finish(
        x,
        plan,
        input_norm,
        ps.branch,
        ps.probability,
        options.verify,
    )
}

/// Same contract as [`run_qba`], evaluated as the dense operator product
/// `U_dechirp · QFT⁻¹ · U_conv · QFT · U_chirp` applied to the input column.
pub fn run_qba_dense(x: &ComplexVec, plan: &BluesteinPlan) -> Result<QbaResult> {
    check_input(x, plan)?;
    if plan.m > DENSE_MAX_MAIN_QUBITS {
        return Err(QbaError::Resource {
            width: plan.m,
            max: DENSE_MAX_MAIN_QUBITS,
        });
    }
    let width = plan.width();
    let lift = |c: Circuit| -> Result<Circuit> {
        let mut wide = Circuit::new(width)?;
        wide.extend_from(&c)?;
        Ok(wide)
    };
    let mut conv = Circuit::new(width)?;
    conv.push(Gate::multiplexed_rotation(plan.betas(), plan.ancilla()))?;

    let u_chirp = circuit_to_matrix(&lift(plan.chirp_circuit()?)?)?;
    let u_qft = circuit_to_matrix(&lift(qft_circuit(plan.m, false)?)?)?;
    let u_conv = circuit_to_matrix(&conv)?;
    let u_iqft = circuit_to_matrix(&lift(qft_circuit(plan.m, true)?)?)?;
    let u_total = &u_chirp * &u_iqft * &u_conv * &u_qft * &u_chirp;

    let (input, input_norm) = StateVector::init_amplitudes(width, x)?;
    let out = u_total * DVector::from_column_slice(input.amplitudes());
    let branch: Vec<Complex64> = out.iter().take(plan.big_m).copied().collect();
    let probability: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
    if probability < crate::simulator::MIN_BRANCH_PROBABILITY {
        return Err(QbaError::ZeroProbability { probability });
    }
    finish(x, plan, input_norm, branch, probability, true)
}

/// Random generator for trial `trial` of size `n`: one ChaCha8 key per seed,
/// one stream per `(n, trial)`.
pub fn trial_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | trial as u64);
    rng
}

/// Unit-norm vector with i.i.d. complex Gaussian entries.
pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> ComplexVec {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = crate::numerics::l2_norm(&v);
        if norm > 0.0 {
            return ComplexVec::new(v.into_iter().map(|z| z / norm).collect())
                .expect("normalized gaussian vector is finite");
        }
    }
}

/// Per-length summary from [`verify_range`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub trials: usize,
    /// Relative L2 error of `y` against the direct DFT.
    pub max_rel_error: f64,
    pub mean_rel_error: f64,
    /// `max |logical_mass - n/α²|` over trials.
    pub max_mass_error: f64,
    pub min_success_probability: f64,
    /// Every trial had `success_probability >= n/α²` (up to 1e-8).
    pub success_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn max_rel_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.max_rel_error)
            .fold(0.0, f64::max)
    }

    pub fn max_mass_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.max_mass_error)
            .fold(0.0, f64::max)
    }
}

/// Tolerance used for the success-probability identity in [`verify_range`].
pub const MASS_TOL: f64 = 1e-8;

/// Runs `trials` random unit-norm inputs for every `n` in `n_min..=n_max`
/// through [`run_qba`] and compares against [`dft_direct`]. Lengths are
/// processed in parallel; results do not depend on the thread count.
pub fn verify_range(n_min: usize, n_max: usize, trials: usize, seed: u64) -> Result<VerifyReport> {
    if n_min == 0 || n_min > n_max {
        return Err(QbaError::Argument(format!(
            "need 1 <= n_min <= n_max, got {n_min}..={n_max}"
        )));
    }
    if trials == 0 {
        return Err(QbaError::Argument("trials must be at least 1".into()));
    }
    let rows = (n_min..=n_max)
        .into_par_iter()
        .map(|n| verify_one(n, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { seed, rows })
}

fn verify_one(n: usize, trials: usize, seed: u64) -> Result<VerifyRow> {
    let plan = build_plan(n)?;
    let expected_mass = n as f64 / (plan.alpha * plan.alpha);
    let mut row = VerifyRow {
        n,
        m: plan.m,
        alpha: plan.alpha,
        trials,
        max_rel_error: 0.0,
        mean_rel_error: 0.0,
        max_mass_error: 0.0,
        min_success_probability: f64::INFINITY,
        success_bound_holds: true,
    };
    for trial in 0..trials {
        let x = random_unit_vector(n, &mut trial_rng(seed, n, trial));
        let res = run_qba(&x, &plan, RunOptions::default())?;
        let err = relative_l2_error(&res.y, &dft_direct(&x)?);
        row.max_rel_error = row.max_rel_error.max(err);
        row.mean_rel_error += err / trials as f64;
        row.max_mass_error = row
            .max_mass_error
            .max((res.logical_mass - expected_mass).abs());
        row.min_success_probability = row.min_success_probability.min(res.success_probability);
        row.success_bound_holds &= res.success_probability >= expected_mass - MASS_TOL;
    }
    Ok(row)
}

//! Dense state-vector simulator.
//!
//! Amplitudes are indexed little-endian (qubit 0 is bit 0 of the index).
//! Operations mutate the state in place.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuits::{clamp_beta, remove_bit, Circuit, Gate};
use crate::error::{QbaError, Result};
use crate::numerics::{l2_norm, ComplexVec};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 30;

/// Tolerance on `|phase| = 1` for [`StateVector::apply_diagonal`].
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Branches lighter than this cannot be post-selected.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Outcome of projecting one qubit onto a fixed value.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelection {
    /// Renormalized state on the remaining qubits.
    pub state: StateVector,
    /// Weight of the selected branch.
    pub probability: f64,
    /// The same branch before renormalization; `‖branch‖² = probability`.
    pub branch: Vec<Complex64>,
}

fn check_width(q: usize) -> Result<()> {
    if q == 0 || q > MAX_QUBITS {
        return Err(QbaError::Argument(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {q}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// The computational basis state `|j⟩` on `q` qubits.
    pub fn init_basis(q: usize, j: usize) -> Result<Self> {
        check_width(q)?;
        let dim = 1usize << q;
        if j >= dim {
            return Err(QbaError::Index {
                index: j,
                bound: dim,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[j] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits: q,
            amplitudes,
        })
    }

    /// Loads `x / ‖x‖` into the first `|x|` amplitudes, zero elsewhere.
    /// Returns the state and `‖x‖`.
    pub fn init_amplitudes(q: usize, x: &ComplexVec) -> Result<(Self, f64)> {
        check_width(q)?;
        let dim = 1usize << q;
        if x.len() > dim {
            return Err(QbaError::Size(format!(
                "{} amplitudes do not fit in {q} qubits",
                x.len()
            )));
        }
        let norm = x.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QbaError::Normalization(format!(
                "cannot normalize a vector of norm {norm}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        for (a, &v) in amplitudes.iter_mut().zip(x.iter()) {
            *a = v / norm;
        }
        Ok((
            Self {
                num_qubits: q,
                amplitudes,
            },
            norm,
        ))
    }

    /// Wraps raw amplitudes without normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(QbaError::Size(format!("{dim} is not a power of two >= 2")));
        }
        let q = dim.trailing_zeros() as usize;
        check_width(q)?;
        Ok(Self {
            num_qubits: q,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let amps = &mut self.amplitudes;
        match gate {
            Gate::Hadamard { target } => {
                let mask = 1usize << target;
                for i in 0..amps.len() {
                    if i & mask == 0 {
                        let (a, b) = (amps[i], amps[i | mask]);
                        amps[i] = (a + b) * FRAC_1_SQRT_2;
                        amps[i | mask] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::Phase { target, angle } => {
                let mask = 1usize << target;
                let w = Complex64::from_polar(1.0, *angle);
                amps.iter_mut()
                    .enumerate()
                    .filter(|(i, _)| i & mask != 0)
                    .for_each(|(_, a)| *a *= w);
            }
            Gate::ControlledPhase {
                control,
                target,
                angle,
            } => {
                let mask = (1usize << control) | (1usize << target);
                let w = Complex64::from_polar(1.0, *angle);
                amps.iter_mut()
                    .enumerate()
                    .filter(|(i, _)| i & mask == mask)
                    .for_each(|(_, a)| *a *= w);
            }
            Gate::Swap { a, b } => {
                let (ma, mb) = (1usize << a, 1usize << b);
                for i in 0..amps.len() {
                    if i & ma != 0 && i & mb == 0 {
                        amps.swap(i, i ^ ma ^ mb);
                    }
                }
            }
            Gate::MultiplexedAncillaRotation { betas, ancilla } => {
                self.rotate_ancilla(betas, *ancilla);
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() > self.num_qubits {
            return Err(QbaError::Size(format!(
                "{}-qubit circuit applied to a {}-qubit state",
                circuit.width(),
                self.num_qubits
            )));
        }
        circuit.gates().iter().try_for_each(|g| self.apply_gate(g))
    }

    /// Multiplies amplitude `j` by `phases[j]`; every phase must be unimodular.
    pub fn apply_diagonal(&mut self, phases: &[Complex64]) -> Result<()> {
        if phases.len() != self.amplitudes.len() {
            return Err(QbaError::Size(format!(
                "diagonal of length {} on a state of dimension {}",
                phases.len(),
                self.amplitudes.len()
            )));
        }
        if let Some((index, p)) = phases
            .iter()
            .enumerate()
            .find(|(_, p)| (p.norm() - 1.0).abs() > UNIMODULAR_TOL)
        {
            return Err(QbaError::Unitarity {
                index,
                modulus: p.norm(),
            });
        }
        self.amplitudes
            .iter_mut()
            .zip(phases)
            .for_each(|(a, p)| *a *= p);
        Ok(())
    }

    /// Block-encodes `diag(betas)` with `ancilla` as the flag qubit; see
    /// [`Gate::MultiplexedAncillaRotation`].
    pub fn apply_multiplexed_ancilla_rotation(
        &mut self,
        betas: &ComplexVec,
        ancilla: usize,
    ) -> Result<()> {
        self.apply_gate(&Gate::multiplexed_rotation(betas.clone(), ancilla))
    }

    fn rotate_ancilla(&mut self, betas: &[Complex64], ancilla: usize) {
        let mask = 1usize << ancilla;
        let amps = &mut self.amplitudes;
        for i0 in 0..amps.len() {
            if i0 & mask != 0 {
                continue;
            }
            let i1 = i0 | mask;
            let beta = clamp_beta(betas[remove_bit(i0, ancilla)]);
            let gamma = (1.0 - beta.norm_sqr()).max(0.0).sqrt();
            let (a0, a1) = (amps[i0], amps[i1]);
            amps[i0] = beta * a0 - a1 * gamma;
            amps[i1] = a0 * gamma + beta.conj() * a1;
        }
    }

    /// Projects `qubit` onto `outcome` and drops it from the register.
    pub fn postselect(&self, qubit: usize, outcome: bool) -> Result<PostSelection> {
        if qubit >= self.num_qubits {
            return Err(QbaError::Index {
                index: qubit,
                bound: self.num_qubits,
            });
        }
        if self.num_qubits == 1 {
            return Err(QbaError::Argument(
                "cannot post-select the only qubit of a register".into(),
            ));
        }
        let mask = 1usize << qubit;
        let want = if outcome { mask } else { 0 };
        let branch: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, &a)| a)
            .collect();
        let probability: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
        if probability < MIN_BRANCH_PROBABILITY {
            return Err(QbaError::ZeroProbability { probability });
        }
        let scale = probability.sqrt();
        let state = StateVector {
            num_qubits: self.num_qubits - 1,
            amplitudes: branch.iter().map(|a| a / scale).collect(),
        };
        Ok(PostSelection {
            state,
            probability,
            branch,
        })
    }

    /// Born-rule probabilities of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Draws `shots` computational-basis measurements.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
        sample_distribution(&self.probabilities(), shots, seed)
    }
}

/// Histogram of `shots` draws from `weights` (need not sum to one), using a
/// ChaCha8 stream seeded from `seed`. Only indices that were drawn appear.
pub fn sample_distribution(weights: &[f64], shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    if shots == 0 {
        return Err(QbaError::Argument("shots must be at least 1".into()));
    }
    let dist = WeightedIndex::new(weights)
        .map_err(|e| QbaError::Argument(format!("invalid sampling weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = BTreeMap::new();
    for _ in 0..shots {
        *hist.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(hist)
}

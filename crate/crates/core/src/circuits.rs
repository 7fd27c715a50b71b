//! Gate IR and circuit builders.
//!
//! Qubit 0 is the least-significant bit of a basis index. The QFT built here
//! uses the kernel `e^{-2πi jk/M}/√M`, i.e. it is the unitary forward DFT, so
//! that "QFT, multiply by the DFT of a kernel, inverse QFT" is a circular
//! convolution with exactly the classical conventions of [`crate::numerics`].

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QbaError, Result};
use crate::numerics::ComplexVec;

/// Widest register for which dense matrices are built.
pub const DENSE_MAX_WIDTH: usize = 12;

/// Slack allowed on `|β| <= 1` before a multiplexed rotation is rejected.
pub const BETA_CLAMP_TOL: f64 = 1e-12;

const TWO_PI: f64 = 2.0 * PI;

/// Reduces an angle into `(-2π, 2π)` keeping its sign.
pub fn reduce_angle(angle: f64) -> f64 {
    let r = angle % TWO_PI;
    if r == -TWO_PI {
        TWO_PI
    } else {
        r
    }
}

/// A single circuit operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "GateRecord", try_from = "GateRecord")]
pub enum Gate {
    Hadamard {
        target: usize,
    },
    /// `|1⟩ → e^{iθ}|1⟩` on the target.
    Phase {
        target: usize,
        angle: f64,
    },
    /// `|11⟩ → e^{iθ}|11⟩`; symmetric in its two qubits.
    ControlledPhase {
        control: usize,
        target: usize,
        angle: f64,
    },
    Swap {
        a: usize,
        b: usize,
    },
    /// Block-encoding of a diagonal: for every main-register index `k` the
    /// ancilla pair is rotated by `[[β_k, -γ_k], [γ_k, conj(β_k)]]` with
    /// `γ_k = sqrt(1 - |β_k|²)`. The main-register index is the basis index
    /// with the ancilla bit removed.
    MultiplexedAncillaRotation {
        betas: ComplexVec,
        ancilla: usize,
    },
}

impl Gate {
    pub fn hadamard(target: usize) -> Self {
        Gate::Hadamard { target }
    }

    pub fn phase(target: usize, angle: f64) -> Self {
        Gate::Phase {
            target,
            angle: reduce_angle(angle),
        }
    }

    pub fn controlled_phase(control: usize, target: usize, angle: f64) -> Self {
        Gate::ControlledPhase {
            control,
            target,
            angle: reduce_angle(angle),
        }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::Swap { a, b }
    }

    pub fn multiplexed_rotation(betas: ComplexVec, ancilla: usize) -> Self {
        Gate::MultiplexedAncillaRotation { betas, ancilla }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::Hadamard { .. } => "h",
            Gate::Phase { .. } => "p",
            Gate::ControlledPhase { .. } => "cp",
            Gate::Swap { .. } => "swap",
            Gate::MultiplexedAncillaRotation { .. } => "mux_ry",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Hadamard { target } | Gate::Phase { target, .. } => vec![target],
            Gate::ControlledPhase {
                control, target, ..
            } => vec![control, target],
            Gate::Swap { a, b } => vec![a, b],
            Gate::MultiplexedAncillaRotation { ancilla, .. } => vec![ancilla],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Phase { angle, .. } | Gate::ControlledPhase { angle, .. } => Some(angle),
            _ => None,
        }
    }

    /// Checks qubit indices, angles and rotation amplitudes against a register
    /// of `width` qubits.
    pub fn validate(&self, width: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= width {
                return Err(QbaError::Index {
                    index: q,
                    bound: width,
                });
            }
        }
        match self {
            Gate::ControlledPhase {
                control, target, ..
            } if control == target => Err(QbaError::Argument(format!(
                "controlled phase on a single qubit {control}"
            ))),
            Gate::Swap { a, b } if a == b => {
                Err(QbaError::Argument(format!("swap of qubit {a} with itself")))
            }
            Gate::Phase { angle, .. } | Gate::ControlledPhase { angle, .. }
                if !angle.is_finite() =>
            {
                Err(QbaError::Argument("non-finite gate angle".into()))
            }
            Gate::MultiplexedAncillaRotation { betas, .. } => {
                let expected = 1usize << (width - 1);
                if betas.len() != expected {
                    return Err(QbaError::Size(format!(
                        "multiplexed rotation on {width} qubits needs {expected} amplitudes, got {}",
                        betas.len()
                    )));
                }
                if let Some((k, b)) = betas
                    .iter()
                    .enumerate()
                    .find(|(_, b)| b.norm() > 1.0 + BETA_CLAMP_TOL)
                {
                    return Err(QbaError::Normalization(format!(
                        "|beta_{k}| = {} exceeds 1; normalization constant too small",
                        b.norm()
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The inverse operation. Multiplexed rotations have no inverse within
    /// the IR: the adjoint `[[β̄, γ], [-γ, β]]` would need `γ < 0`.
    pub fn inverse(&self) -> Result<Gate> {
        Ok(match self {
            Gate::Phase { target, angle } => Gate::Phase {
                target: *target,
                angle: -angle,
            },
            Gate::ControlledPhase {
                control,
                target,
                angle,
            } => Gate::ControlledPhase {
                control: *control,
                target: *target,
                angle: -angle,
            },
            Gate::MultiplexedAncillaRotation { .. } => {
                return Err(QbaError::Argument(
                    "a multiplexed ancilla rotation has no inverse in the gate IR".into(),
                ))
            }
            g => g.clone(),
        })
    }
}

/// The on-disk shape of a [`Gate`].
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    betas: Option<ComplexVec>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        let kind = g.name().to_string();
        let qubits = g.qubits();
        let angle = g.angle();
        let betas = match g {
            Gate::MultiplexedAncillaRotation { betas, .. } => Some(betas),
            _ => None,
        };
        GateRecord {
            kind,
            qubits,
            angle,
            betas,
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = QbaError;

    fn try_from(r: GateRecord) -> Result<Self> {
        let arity = |n: usize| -> Result<()> {
            if r.qubits.len() == n {
                Ok(())
            } else {
                Err(QbaError::Argument(format!(
                    "gate '{}' takes {n} qubit(s), got {}",
                    r.kind,
                    r.qubits.len()
                )))
            }
        };
        let angle = || {
            r.angle.ok_or_else(|| {
                QbaError::Argument(format!("gate '{}' is missing its angle", r.kind))
            })
        };
        match r.kind.as_str() {
            "h" => {
                arity(1)?;
                Ok(Gate::hadamard(r.qubits[0]))
            }
            "p" => {
                arity(1)?;
                Ok(Gate::phase(r.qubits[0], angle()?))
            }
            "cp" => {
                arity(2)?;
                Ok(Gate::controlled_phase(r.qubits[0], r.qubits[1], angle()?))
            }
            "swap" => {
                arity(2)?;
                Ok(Gate::swap(r.qubits[0], r.qubits[1]))
            }
            "mux_ry" => {
                arity(1)?;
                let betas = r
                    .betas
                    .clone()
                    .ok_or_else(|| QbaError::Argument("mux_ry is missing betas".into()))?;
                Ok(Gate::multiplexed_rotation(betas, r.qubits[0]))
            }
            other => Err(QbaError::Argument(format!("unknown gate kind '{other}'"))),
        }
    }
}

/// An ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct RawCircuit {
    width: usize,
    gates: Vec<Gate>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = QbaError;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        let mut c = Circuit::new(raw.width)?;
        for g in raw.gates {
            c.push(g)?;
        }
        Ok(c)
    }
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(QbaError::Argument(
                "circuit width must be at least 1".into(),
            ));
        }
        Ok(Self {
            width,
            gates: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends every gate of `other`, which may be narrower than `self`.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.width > self.width {
            return Err(QbaError::Size(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.width, self.width
            )));
        }
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(self)
    }

    /// Reversed gate order with each gate inverted.
    pub fn inverse(&self) -> Result<Circuit> {
        Ok(Circuit {
            width: self.width,
            gates: self
                .gates
                .iter()
                .rev()
                .map(Gate::inverse)
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization cannot fail")
    }
}

/// QFT on `m` qubits with kernel `e^{-2πi jk/M}/√M` (forward) or its adjoint.
///
/// Layout: for each qubit from the most significant down, a Hadamard followed
/// by controlled phases from every lower qubit, then `⌊m/2⌋` swaps.
pub fn qft_circuit(m: usize, inverse: bool) -> Result<Circuit> {
    if m == 0 {
        return Err(QbaError::Argument("QFT needs at least one qubit".into()));
    }
    let mut c = Circuit::new(m)?;
    for target in (0..m).rev() {
        c.push(Gate::hadamard(target))?;
        for control in (0..target).rev() {
            let angle = -PI / (1u64 << (target - control)) as f64;
            c.push(Gate::controlled_phase(control, target, angle))?;
        }
    }
    for q in 0..m / 2 {
        c.push(Gate::swap(q, m - 1 - q))?;
    }
    if inverse {
        c.inverse()
    } else {
        Ok(c)
    }
}

/// Bit-expansion synthesis of `|j⟩ → e^{i·φ(j²)}|j⟩` where `coeff_angle(c)`
/// gives the phase contributed by a term `c = 2^e` of `j²`.
fn quadratic_phase_from(m: usize, coeff_angle: impl Fn(u32) -> f64) -> Result<Circuit> {
    if m == 0 {
        return Err(QbaError::Argument(
            "quadratic phase needs at least one qubit".into(),
        ));
    }
    let mut c = Circuit::new(m)?;
    for l in 0..m {
        c.push(Gate::phase(l, coeff_angle(2 * l as u32)))?;
    }
    for l in 0..m {
        for r in l + 1..m {
            c.push(Gate::controlled_phase(
                l,
                r,
                coeff_angle((l + r + 1) as u32),
            ))?;
        }
    }
    Ok(c)
}

/// `|j⟩ → e^{iθ j²}|j⟩` with `m(m+1)/2` phase-type gates: one `Phase` per bit
/// (`θ·2^{2l}`) and one `ControlledPhase` per bit pair (`θ·2^{l+r+1}`).
pub fn quadratic_phase_circuit(m: usize, theta: f64) -> Result<Circuit> {
    if !theta.is_finite() {
        return Err(QbaError::Argument("theta must be finite".into()));
    }
    quadratic_phase_from(m, |e| theta * 2f64.powi(e as i32))
}

/// Same diagonal as `quadratic_phase_circuit(m, sign·π/n)`, but each angle is
/// formed from `2^e mod 2n` in integer arithmetic, so large exponents lose no
/// precision.
pub fn chirp_circuit(m: usize, n: usize, sign: f64) -> Result<Circuit> {
    if n == 0 {
        return Err(QbaError::Argument("chirp length n must be positive".into()));
    }
    let modulus = 2 * n as u128;
    quadratic_phase_from(m, |e| {
        let r = mod_pow2(e, modulus);
        sign * PI * r as f64 / n as f64
    })
}

fn mod_pow2(e: u32, modulus: u128) -> u128 {
    let mut r = 1 % modulus;
    for _ in 0..e {
        r = (r * 2) % modulus;
    }
    r
}

/// Removes bit `q` from `index`, shifting higher bits down.
pub(crate) fn remove_bit(index: usize, q: usize) -> usize {
    let low = index & ((1 << q) - 1);
    let high = (index >> (q + 1)) << q;
    low | high
}

/// Nonzero entries `(column, value)` of row `row` of the gate's matrix on a
/// register of `width` qubits. Built from the gate definition, independently
/// of the state-vector kernels.
fn gate_row(gate: &Gate, row: usize) -> [(usize, Complex64); 2] {
    let zero = (0usize, Complex64::new(0.0, 0.0));
    let one = Complex64::new(1.0, 0.0);
    let bit = |q: usize| (row >> q) & 1 == 1;
    match gate {
        Gate::Hadamard { target } => {
            let mask = 1 << target;
            let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
            let sign = if bit(*target) { -h } else { h };
            [(row & !mask, h), (row | mask, sign)]
        }
        Gate::Phase { target, angle } => {
            let v = if bit(*target) {
                Complex64::from_polar(1.0, *angle)
            } else {
                one
            };
            [(row, v), zero]
        }
        Gate::ControlledPhase {
            control,
            target,
            angle,
        } => {
            let v = if bit(*control) && bit(*target) {
                Complex64::from_polar(1.0, *angle)
            } else {
                one
            };
            [(row, v), zero]
        }
        Gate::Swap { a, b } => {
            let col = if bit(*a) != bit(*b) {
                row ^ (1 << a) ^ (1 << b)
            } else {
                row
            };
            [(col, one), zero]
        }
        Gate::MultiplexedAncillaRotation { betas, ancilla } => {
            let mask = 1 << ancilla;
            let k = remove_bit(row, *ancilla);
            let beta = clamp_beta(betas[k]);
            let gamma = Complex64::new((1.0 - beta.norm_sqr()).max(0.0).sqrt(), 0.0);
            let (c0, c1) = (row & !mask, row | mask);
            if bit(*ancilla) {
                [(c0, gamma), (c1, beta.conj())]
            } else {
                [(c0, beta), (c1, -gamma)]
            }
        }
    }
}

/// Scales `β` back onto the unit circle when it overshoots by rounding.
pub(crate) fn clamp_beta(beta: Complex64) -> Complex64 {
    let r = beta.norm();
    if r > 1.0 {
        beta / r
    } else {
        beta
    }
}

fn check_dense_width(width: usize) -> Result<()> {
    if width > DENSE_MAX_WIDTH {
        Err(QbaError::Resource {
            width,
            max: DENSE_MAX_WIDTH,
        })
    } else {
        Ok(())
    }
}

/// Dense matrix of a single gate on `width` qubits.
pub fn gate_matrix(gate: &Gate, width: usize) -> Result<DMatrix<Complex64>> {
    check_dense_width(width)?;
    gate.validate(width)?;
    let dim = 1usize << width;
    let mut u = DMatrix::zeros(dim, dim);
    for row in 0..dim {
        for (col, v) in gate_row(gate, row) {
            if v != Complex64::new(0.0, 0.0) {
                u[(row, col)] += v;
            }
        }
    }
    Ok(u)
}

/// `G·A` for a gate `G` with at most two nonzeros per row.
fn left_multiply(gate: &Gate, a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = a.nrows();
    let mut out = DMatrix::zeros(dim, a.ncols());
    for row in 0..dim {
        for (col, v) in gate_row(gate, row) {
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..a.ncols() {
                out[(row, j)] += v * a[(col, j)];
            }
        }
    }
    out
}

/// Dense unitary of the whole circuit: the product of its gates, first gate
/// rightmost.
pub fn circuit_to_matrix(c: &Circuit) -> Result<DMatrix<Complex64>> {
    check_dense_width(c.width)?;
    let dim = 1usize << c.width;
    let mut u = DMatrix::identity(dim, dim);
    for g in &c.gates {
        u = left_multiply(g, &u);
    }
    Ok(u)
}

/// Per-kind gate tallies for a circuit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub hadamard: usize,
    pub phase: usize,
    pub controlled_phase: usize,
    pub swap: usize,
    /// Multiplexed ancilla rotations, each counted once as a macro-operation.
    pub multiplexed: usize,
    /// The same macro-operations expanded into their `2^(width-1)` two-level
    /// rotations each.
    pub two_level_rotations: usize,
    /// All gate records.
    pub total: usize,
    /// Gate records excluding macro-operations.
    pub elementary: usize,
    /// Controlled phases plus swaps.
    pub two_qubit: usize,
}

pub fn gate_counts(c: &Circuit) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in &c.gates {
        match g {
            Gate::Hadamard { .. } => counts.hadamard += 1,
            Gate::Phase { .. } => counts.phase += 1,
            Gate::ControlledPhase { .. } => counts.controlled_phase += 1,
            Gate::Swap { .. } => counts.swap += 1,
            Gate::MultiplexedAncillaRotation { .. } => {
                counts.multiplexed += 1;
                counts.two_level_rotations += 1 << (c.width - 1);
            }
        }
    }
    counts.total = c.gates.len();
    counts.elementary = counts.total - counts.multiplexed;
    counts.two_qubit = counts.controlled_phase + counts.swap;
    counts
}

/// `m + m(m-1)/2 + ⌊m/2⌋`.
pub fn qft_gate_count(m: usize) -> usize {
    m + m * (m - 1) / 2 + m / 2
}

/// `m(m+1)/2`.
pub fn quadratic_phase_gate_count(m: usize) -> usize {
    m * (m + 1) / 2
}

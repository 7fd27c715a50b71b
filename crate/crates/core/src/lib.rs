//! Exact `N`-point quantum Fourier transforms for arbitrary `N`.
//!
//! The transform is reduced, Bluestein style, to a circular convolution on a
//! power-of-two register: a quadratic-phase chirp, a radix-2 QFT, a
//! block-encoded Fourier-domain multiplication realized with one ancilla and
//! post-selection, an inverse QFT and a de-chirp. Everything runs on a dense
//! state-vector simulator, and the classical DFT, FFT and Bluestein routines
//! in [`numerics`] serve as oracles.
//!
//! ```
//! use qba_core::{build_plan, run_qba, ComplexVec, RunOptions};
//!
//! let x = ComplexVec::from_reals(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
//! let plan = build_plan(x.len()).unwrap();
//! let out = run_qba(&x, &plan, RunOptions { verify: true, ..Default::default() }).unwrap();
//! assert!(out.max_abs_error_vs_oracle.unwrap() < 1e-9);
//! ```

pub mod circuits;
pub mod error;
pub mod numerics;
pub mod qba;
pub mod simulator;

pub use circuits::{
    circuit_to_matrix, gate_counts, gate_matrix, qft_circuit, quadratic_phase_circuit, Circuit,
    Gate, GateCounts,
};
pub use error::{QbaError, Result};
pub use numerics::{bluestein_classical, convolve_circular, dft_direct, fft_radix2, ComplexVec};
pub use qba::{
    build_plan, qba_circuit, run_qba, run_qba_dense, verify_range, BluesteinPlan, DiagonalPath,
    QbaResult, RunOptions, VerifyReport, VerifyRow,
};
pub use simulator::{PostSelection, StateVector};

pub use num_complex::Complex64;

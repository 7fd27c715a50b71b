use thiserror::Error;

/// Errors produced by the transform, simulator and circuit layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QbaError {
    /// A vector or register has the wrong length for the requested operation.
    #[error("size error: {0}")]
    Size(String),

    /// A basis or qubit index lies outside its register.
    #[error("index error: {index} is out of range for bound {bound}")]
    Index { index: usize, bound: usize },

    /// An argument violates a precondition not covered by the other variants.
    #[error("argument error: {0}")]
    Argument(String),

    /// A vector could not be normalized, or a block-encoding amplitude
    /// exceeds unit magnitude.
    #[error("normalization error: {0}")]
    Normalization(String),

    /// A diagonal entry that should be a pure phase is not unimodular.
    #[error("unitarity error: entry {index} has modulus {modulus}")]
    Unitarity { index: usize, modulus: f64 },

    /// Post-selection onto a branch that carries (numerically) no weight.
    #[error("zero-probability branch: p = {probability:e}")]
    ZeroProbability { probability: f64 },

    /// Dense reconstruction requested for a register too wide to hold.
    #[error("resource error: width {width} exceeds the dense limit of {max} qubits")]
    Resource { width: usize, max: usize },

    /// NaN or infinite amplitude.
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
}

pub type Result<T> = std::result::Result<T, QbaError>;

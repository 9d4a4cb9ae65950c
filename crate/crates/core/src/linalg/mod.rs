//! Dense symmetric eigendecomposition, singular values, spectral norms,
//! and executable singular-value perturbation bounds.

mod eigen;
mod matrix;
mod perturbation;
mod spectrum;
mod svd;

pub use eigen::{sym_eigen, sym_eigvals};
pub use matrix::DenseMatrix;
pub use perturbation::{
    check_additive_perturbation, check_mult_perturbation, check_weyl, BoundViolation,
    PerturbationReport,
    PERTURBATION_REL_SLACK,
};
pub use spectrum::{Spectrum, SpectrumKind};
pub use svd::{singular_values, spectral_norm};

pub(crate) use eigen::dot;

use thiserror::Error;

/// Failures of matrix construction and spectral computation.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("entry count mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("degenerate matrix of order {order}; spectral routines need order >= 2")]
    DegenerateOrder { order: usize },
    #[error("asymmetry {asymmetry:.3e} exceeds tolerance {tolerance:.3e}")]
    AsymmetryBeyondTolerance { asymmetry: f64, tolerance: f64 },
    #[error("incompatible shapes: {left:?} vs {right:?}")]
    ProductShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("QL iteration failed to converge for eigenvalue {index}")]
    EigenNoConvergence { index: usize },
    #[error("QR iteration failed to converge for singular value {index}")]
    SvdNoConvergence { index: usize },
    #[error("spectrum must contain at least one value")]
    EmptySpectrum,
    #[error("spectrum contains a non-finite value")]
    NonFiniteSpectrum,
    #[error("singular values cannot be negative")]
    NegativeSingularValue,
}

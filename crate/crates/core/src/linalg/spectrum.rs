//! Ordered spectra of symmetric eigenproblems and singular value
//! decompositions.

use serde::{Deserialize, Serialize};

use super::LinalgError;
use crate::scalar::Scalar;

/// What kind of spectral values a [`Spectrum`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    /// Eigenvalues of a real symmetric matrix; may be negative.
    EigenvaluesSymmetric,
    /// Singular values; nonnegative by definition.
    SingularValues,
}

/// Descending sequence of eigenvalues or singular values together with
/// the dimensions of the matrix they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<F> {
    values: Vec<F>,
    kind: SpectrumKind,
    source_rows: usize,
    source_cols: usize,
}

impl<F: Scalar> Spectrum<F> {
    /// Wraps already-computed values; sorts them descending and enforces
    /// the kind-specific sign constraint.
    pub fn new(
        mut values: Vec<F>,
        kind: SpectrumKind,
        source_rows: usize,
        source_cols: usize,
    ) -> Result<Self, LinalgError> {
        if values.is_empty() {
            return Err(LinalgError::EmptySpectrum);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::NonFiniteSpectrum);
        }
        if kind == SpectrumKind::SingularValues && values.iter().any(|v| *v < F::zero()) {
            return Err(LinalgError::NegativeSingularValue);
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite values compare"));
        Ok(Self { values, kind, source_rows, source_cols })
    }

    pub(crate) fn from_sorted_unchecked(
        values: Vec<F>,
        kind: SpectrumKind,
        source_rows: usize,
        source_cols: usize,
    ) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        Self { values, kind, source_rows, source_cols }
    }

    /// Values sorted descending.
    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    /// Dimensions of the source matrix as `(rows, cols)`.
    pub fn source_dims(&self) -> (usize, usize) {
        (self.source_rows, self.source_cols)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest value.
    pub fn top(&self) -> F {
        self.values[0]
    }

    /// Sum of all values; for symmetric eigenvalues this equals the trace
    /// of the source matrix up to round-off.
    pub fn sum(&self) -> F {
        self.values.iter().copied().sum()
    }
}

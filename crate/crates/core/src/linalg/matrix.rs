//! Dense row-major matrix storage.
//!
//! This is deliberately a small owned type, not a general linear-algebra
//! facade: the crate only needs products, transposes, and symmetric rank
//! updates on dense real matrices. Entries are validated to be finite at
//! every public construction site; internal routines that can only
//! produce finite values use the unchecked constructor.

use serde::{Deserialize, Serialize};

use super::LinalgError;
use crate::scalar::Scalar;

/// Dense real matrix in row-major order with strictly positive dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawDenseMatrix<F>",
    bound(deserialize = "F: Scalar + Deserialize<'de>")
)]
pub struct DenseMatrix<F> {
    rows: usize,
    cols: usize,
    entries: Vec<F>,
}

/// Unvalidated mirror used only as a deserialization staging type, so that
/// decoded matrices pass through the same checks as constructed ones.
#[derive(Deserialize)]
struct RawDenseMatrix<F> {
    rows: usize,
    cols: usize,
    entries: Vec<F>,
}

impl<F: Scalar> TryFrom<RawDenseMatrix<F>> for DenseMatrix<F> {
    type Error = LinalgError;

    fn try_from(raw: RawDenseMatrix<F>) -> Result<Self, Self::Error> {
        Self::new(raw.rows, raw.cols, raw.entries)
    }
}

impl<F: Scalar> DenseMatrix<F> {
    /// Builds a matrix from row-major entries.
    ///
    /// Rejects empty dimensions, length mismatches, and non-finite entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<F>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyDimension { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|x| !x.is_finite()) {
            return Err(LinalgError::NonFiniteEntry {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix without scanning entries; caller guarantees shape
    /// and finiteness.
    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, entries: Vec<F>) -> Self {
        debug_assert!(rows > 0 && cols > 0);
        debug_assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, entries }
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyDimension { rows, cols });
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, LinalgError> {
        Self::new(rows, cols, vec![F::zero(); rows.max(1) * cols.max(1)])
            .and_then(|m| if rows == 0 || cols == 0 { Err(LinalgError::EmptyDimension { rows, cols }) } else { Ok(m) })
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Result<Self, LinalgError> {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: F) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = value;
    }

    /// Contiguous view of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[F] {
        debug_assert!(i < self.rows);
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [F] {
        debug_assert!(i < self.rows);
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut out = vec![F::zero(); self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        Self::from_vec_unchecked(self.cols, self.rows, out)
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ProductShapeMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![F::zero(); m * n];
        // i-k-j loop order keeps both operand accesses contiguous.
        for i in 0..m {
            let lrow = self.row(i);
            let orow = &mut out[i * n..(i + 1) * n];
            for (l, &a) in lrow.iter().enumerate().take(k) {
                let rrow = &rhs.entries[l * n..(l + 1) * n];
                for (o, &b) in orow.iter_mut().zip(rrow.iter()) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_vec_unchecked(m, n, out))
    }

    /// Entrywise sum `self + rhs`.
    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::ProductShapeMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Self::from_vec_unchecked(self.rows, self.cols, entries))
    }

    /// Entrywise scaling.
    pub fn scale(&self, factor: F) -> Self {
        let entries = self.entries.iter().map(|&a| a * factor).collect();
        Self::from_vec_unchecked(self.rows, self.cols, entries)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> F {
        self.entries.iter().map(|&a| a * a).sum::<F>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> F {
        self.entries
            .iter()
            .fold(F::zero(), |acc, &a| acc.max(a.abs()))
    }

    /// Maximum absolute asymmetry `max |A_ij - A_ji|`; zero for
    /// non-square matrices is never returned because the caller checks
    /// squareness first.
    pub fn max_asymmetry(&self) -> F {
        debug_assert!(self.is_square());
        let mut worst = F::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Symmetric part `(A + A^T) / 2`.
    pub fn symmetrized(&self) -> Self {
        debug_assert!(self.is_square());
        let half = F::one() / (F::one() + F::one());
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let s = (self.get(i, j) + self.get(j, i)) * half;
                out.set(i, j, s);
                out.set(j, i, s);
            }
        }
        out
    }

    /// Scaled Gram matrix `(1/divisor) * A * A^T`.
    ///
    /// Entries are independent row dot products, so the result is
    /// bitwise identical for any rayon thread count. Parallelism only
    /// kicks in when the work is large enough to amortize it.
    pub fn gram_scaled(&self, divisor: F) -> Self {
        use rayon::prelude::*;
        let p = self.rows;
        let inv = F::one() / divisor;
        let mut out = vec![F::zero(); p * p];
        let fill_row = |(i, orow): (usize, &mut [F])| {
            let ri = self.row(i);
            for (j, o) in orow.iter_mut().enumerate().take(i + 1) {
                *o = super::dot(ri, self.row(j)) * inv;
            }
        };
        if p * self.cols >= 1 << 14 {
            out.par_chunks_mut(p).enumerate().for_each(fill_row);
        } else {
            out.chunks_mut(p).enumerate().for_each(fill_row);
        }
        for i in 0..p {
            for j in (i + 1)..p {
                out[i * p + j] = out[j * p + i];
            }
        }
        Self::from_vec_unchecked(p, p, out)
    }

    /// Main diagonal of a square matrix.
    pub fn diagonal(&self) -> Vec<F> {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).collect()
    }

    /// Sum of the main diagonal.
    pub fn trace(&self) -> F {
        self.diagonal().into_iter().sum()
    }
}

//! Sample covariance and correlation matrices from a p x n data matrix
//! whose columns are observations.
//!
//! Two centering conventions are supported and kept strictly apart:
//!
//! * theoretical centering subtracts a known mean vector and divides by n;
//! * data centering subtracts per-row sample means and divides by n - 1.
//!
//! Correlation matrices are obtained from either covariance by two-sided
//! diagonal rescaling, then symmetrized, with the diagonal pinned to one.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{DenseMatrix, LinalgError};
use crate::scalar::{fl, fl_usize, Scalar};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("covariance input must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("need at least {min} observations for this centering, got n={n}")]
    SampleTooSmall { n: usize, min: usize },
    #[error("mean vector has length {actual}, expected p={expected}")]
    MeanLengthMismatch { expected: usize, actual: usize },
    #[error("row {row} has nonpositive variance {value}; correlation is undefined")]
    NonPositiveVariance { row: usize, value: f64 },
    #[error("diagonal length mismatch: sample has {sample}, population has {population}")]
    DiagonalLengthMismatch { sample: usize, population: usize },
    #[error("population variance at row {row} must be strictly positive")]
    NonPositivePopulationVariance { row: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which mean was removed before forming the covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenteringKind {
    /// Known mean subtracted, divisor n.
    Theoretical,
    /// Sample mean subtracted, divisor n - 1.
    Data,
}

/// Centering request for [`sample_matrices`].
#[derive(Debug, Clone, Copy)]
pub enum Centering<'a, F> {
    /// Subtract this known mean vector (length p) and divide by n.
    Theoretical(&'a [F]),
    /// Subtract per-row sample means and divide by n - 1.
    Data,
}

/// Covariance, correlation, and the variance diagonal of one dataset under
/// one centering convention.
#[derive(Debug, Clone, Serialize)]
pub struct SampleMatrices<F> {
    pub cov: DenseMatrix<F>,
    pub corr: DenseMatrix<F>,
    /// Diagonal of `cov`, the per-row sample variances.
    pub variances: Vec<F>,
    pub centering: CenteringKind,
}

/// Covariance about a known mean: `(1/n) (X - M)(X - M)^T` where `M`
/// repeats `mu` across columns. The divisor is exactly n.
pub fn cov_theoretical<F: Scalar>(
    x: &DenseMatrix<F>,
    mu: &[F],
) -> Result<DenseMatrix<F>, StatsError> {
    if mu.len() != x.rows() {
        return Err(StatsError::MeanLengthMismatch {
            expected: x.rows(),
            actual: mu.len(),
        });
    }
    let centered = centered_by_rows(x, mu);
    Ok(centered.gram_scaled(fl_usize(x.cols())))
}

/// Covariance about the sample mean: `(1/(n-1)) (X - Xbar)(X - Xbar)^T`.
/// Needs n >= 2 for the divisor to make sense.
pub fn cov_data<F: Scalar>(x: &DenseMatrix<F>) -> Result<DenseMatrix<F>, StatsError> {
    let n = x.cols();
    if n < 2 {
        return Err(StatsError::SampleTooSmall { n, min: 2 });
    }
    let inv_n = F::one() / fl_usize::<F>(n);
    let means: Vec<F> = (0..x.rows())
        .map(|i| x.row(i).iter().copied().sum::<F>() * inv_n)
        .collect();
    let centered = centered_by_rows(x, &means);
    Ok(centered.gram_scaled(fl_usize(n - 1)))
}

/// Correlation from a covariance: `C = D^{-1/2} S D^{-1/2}` with `D` the
/// diagonal of `S`.
///
/// Any nonpositive diagonal entry is an error naming the offending row.
/// The rescaled matrix is symmetrized and its diagonal set to exactly one,
/// so off-diagonal entries can exceed 1 in magnitude only by rounding.
pub fn corr_from_cov<F: Scalar>(cov: &DenseMatrix<F>) -> Result<DenseMatrix<F>, StatsError> {
    if !cov.is_square() {
        return Err(StatsError::NotSquare {
            rows: cov.rows(),
            cols: cov.cols(),
        });
    }
    let p = cov.rows();
    // Underflow guard only: the positivity check has already run, so the
    // floor changes nothing for any variance a float can normally hold.
    let floor = fl::<F>(1e-300).max(F::min_positive_value());
    let mut inv_sqrt = Vec::with_capacity(p);
    for i in 0..p {
        let v = cov.get(i, i);
        if !(v > F::zero()) {
            return Err(StatsError::NonPositiveVariance {
                row: i,
                value: v.to_f64().unwrap_or(f64::NAN),
            });
        }
        inv_sqrt.push(F::one() / v.max(floor).sqrt());
    }
    let mut corr = DenseMatrix::from_fn(p, p, |i, j| cov.get(i, j) * inv_sqrt[i] * inv_sqrt[j])?;
    corr = corr.symmetrized();
    for i in 0..p {
        corr.set(i, i, F::one());
    }
    Ok(corr)
}

/// Worst relative deviation of a sample variance diagonal from its
/// population counterpart: `max_i |d_i / delta_i - 1|`.
pub fn diag_ratio_deviation<F: Scalar>(
    sample: &[F],
    population: &[F],
) -> Result<F, StatsError> {
    if sample.len() != population.len() {
        return Err(StatsError::DiagonalLengthMismatch {
            sample: sample.len(),
            population: population.len(),
        });
    }
    let mut worst = F::zero();
    for (i, (&d, &delta)) in sample.iter().zip(population).enumerate() {
        if !(delta > F::zero()) {
            return Err(StatsError::NonPositivePopulationVariance { row: i });
        }
        worst = worst.max((d / delta - F::one()).abs());
    }
    Ok(worst)
}

/// Computes covariance, correlation, and variances in one pass under the
/// requested centering.
pub fn sample_matrices<F: Scalar>(
    x: &DenseMatrix<F>,
    centering: Centering<'_, F>,
) -> Result<SampleMatrices<F>, StatsError> {
    let (cov, kind) = match centering {
        Centering::Theoretical(mu) => (cov_theoretical(x, mu)?, CenteringKind::Theoretical),
        Centering::Data => (cov_data(x)?, CenteringKind::Data),
    };
    let corr = corr_from_cov(&cov)?;
    let variances = cov.diagonal();
    Ok(SampleMatrices {
        cov,
        corr,
        variances,
        centering: kind,
    })
}

fn centered_by_rows<F: Scalar>(x: &DenseMatrix<F>, center: &[F]) -> DenseMatrix<F> {
    let mut out = x.clone();
    for (i, &c) in center.iter().enumerate() {
        if c != F::zero() {
            for v in out.row_mut(i) {
                *v -= c;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigvals;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0)).unwrap()
    }

    #[test]
    fn theoretical_divisor_is_n() {
        let x = DenseMatrix::new(1, 2, vec![1.0, -1.0]).unwrap();
        let s = cov_theoretical(&x, &[0.0]).unwrap();
        assert_abs_diff_eq!(s.get(0, 0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn data_divisor_is_n_minus_one() {
        let x = DenseMatrix::new(1, 2, vec![0.0, 2.0]).unwrap();
        let s = cov_data(&x).unwrap();
        assert_abs_diff_eq!(s.get(0, 0), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn data_centering_is_shift_invariant() {
        let x = random_matrix(4, 30, 1);
        let shifted = DenseMatrix::from_fn(4, 30, |i, j| x.get(i, j) + 3.0 * (i as f64 + 1.0))
            .unwrap();
        let s = cov_data(&x).unwrap();
        let s2 = cov_data(&shifted).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(s.get(i, j), s2.get(i, j), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn theoretical_centering_rejects_wrong_mean_length() {
        let x = random_matrix(3, 5, 2);
        assert!(matches!(
            cov_theoretical(&x, &[0.0; 2]),
            Err(StatsError::MeanLengthMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn data_centering_needs_two_observations() {
        let x = DenseMatrix::new(2, 1, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            cov_data(&x),
            Err(StatsError::SampleTooSmall { n: 1, min: 2 })
        ));
    }

    #[test]
    fn corr_hand_example() {
        let s = DenseMatrix::new(2, 2, vec![4.0, 2.0, 2.0, 4.0]).unwrap();
        let c = corr_from_cov(&s).unwrap();
        assert_abs_diff_eq!(c.get(0, 1), 0.5, epsilon = 1e-15);
        assert_eq!(c.get(0, 0), 1.0);
        assert_eq!(c.get(1, 1), 1.0);
    }

    #[test]
    fn corr_error_names_offending_row() {
        let s = DenseMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        match corr_from_cov(&s) {
            Err(StatsError::NonPositiveVariance { row, value }) => {
                assert_eq!(row, 1);
                assert_eq!(value, 0.0);
            }
            other => panic!("expected NonPositiveVariance, got {other:?}"),
        }
        let msg = corr_from_cov(&s).unwrap_err().to_string();
        assert!(msg.contains("row 1"), "message was: {msg}");
    }

    #[test]
    fn corr_diag_is_unit_and_entries_bounded() {
        let x = random_matrix(6, 40, 3);
        let m = sample_matrices(&x, Centering::Data).unwrap();
        for i in 0..6 {
            assert_eq!(m.corr.get(i, i), 1.0);
            for j in 0..6 {
                assert!(m.corr.get(i, j).abs() <= 1.0 + 1e-12);
                assert_eq!(m.corr.get(i, j), m.corr.get(j, i));
            }
        }
        assert_eq!(m.centering, CenteringKind::Data);
        assert_eq!(m.variances, m.cov.diagonal());
    }

    #[test]
    fn correlation_is_scale_and_shift_invariant() {
        let x = random_matrix(5, 50, 4);
        let transformed = DenseMatrix::from_fn(5, 50, |i, j| {
            let scale = [0.5, 2.0, 7.0, 0.1, 3.0][i];
            let shift = [-4.0, 0.0, 10.0, 2.5, -0.5][i];
            scale * x.get(i, j) + shift
        })
        .unwrap();
        let c1 = sample_matrices(&x, Centering::Data).unwrap().corr;
        let c2 = sample_matrices(&transformed, Centering::Data).unwrap().corr;
        for i in 0..5 {
            for j in 0..5 {
                assert_abs_diff_eq!(c1.get(i, j), c2.get(i, j), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn sample_covariance_is_psd_up_to_rounding() {
        for seed in [5, 6, 7] {
            let x = random_matrix(8, 20, seed);
            let m = sample_matrices(&x, Centering::Data).unwrap();
            for mat in [&m.cov, &m.corr] {
                let eigs = sym_eigvals(mat).unwrap();
                let top = eigs.top();
                let min = *eigs.values().last().unwrap();
                assert!(min >= -1e-8 * top, "seed {seed}: min {min}, top {top}");
            }
        }
    }

    #[test]
    fn rank_deficiency_shows_as_trailing_zero_eigenvalues() {
        // p = 6 > n = 4: theoretical-centering rank <= 4, data-centering
        // rank <= 3
        let x = random_matrix(6, 4, 8);
        let mu = vec![0.0; 6];

        let ctilde = sample_matrices(&x, Centering::Theoretical(&mu)).unwrap().corr;
        let eigs = sym_eigvals(&ctilde).unwrap();
        let top = eigs.top();
        for &v in &eigs.values()[4..] {
            assert!(v.abs() <= 1e-8 * top, "eig {v} not negligible");
        }

        let c = sample_matrices(&x, Centering::Data).unwrap().corr;
        let eigs = sym_eigvals(&c).unwrap();
        let top = eigs.top();
        for &v in &eigs.values()[3..] {
            assert!(v.abs() <= 1e-8 * top, "eig {v} not negligible");
        }
    }

    #[test]
    fn corr_spectrum_sums_to_dimension() {
        let x = random_matrix(7, 25, 9);
        let c = sample_matrices(&x, Centering::Data).unwrap().corr;
        let eigs = sym_eigvals(&c).unwrap();
        assert_abs_diff_eq!(eigs.sum(), 7.0, epsilon = 1e-8);
    }

    #[test]
    fn diag_ratio_deviation_hand_example() {
        let dev = diag_ratio_deviation(&[1.1, 0.8], &[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(dev, 0.2, epsilon = 1e-12);
        assert!(matches!(
            diag_ratio_deviation(&[1.0], &[1.0, 1.0]),
            Err(StatsError::DiagonalLengthMismatch { .. })
        ));
        assert!(matches!(
            diag_ratio_deviation(&[1.0], &[0.0]),
            Err(StatsError::NonPositivePopulationVariance { row: 0 })
        ));
    }

    #[test]
    fn corr_rejects_non_square() {
        let s = DenseMatrix::new(2, 3, vec![0.0; 6]).unwrap();
        assert!(matches!(
            corr_from_cov(&s),
            Err(StatsError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn works_in_f32() {
        let x = DenseMatrix::<f32>::new(2, 4, vec![1.0, 2.0, 3.0, 4.0, 4.0, 3.0, 2.0, 1.0])
            .unwrap();
        let m = sample_matrices(&x, Centering::Data).unwrap();
        assert!((m.corr.get(0, 1) + 1.0).abs() < 1e-6);
    }
}

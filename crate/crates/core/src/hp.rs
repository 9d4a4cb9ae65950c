//! Time-series utilities for correlation trend analysis: Fisher's
//! z-transform, the Hodrick-Prescott trend/cycle decomposition, and a
//! rolling mean-correlation series.
//!
//! The HP trend minimizes `||y - x||^2 + lambda ||D x||^2` with D the
//! second-difference operator, equivalently solves
//! `(I + lambda D^T D) x = y`. Constants and arithmetic progressions are
//! fixed points of the system matrix, so the input's least-squares line
//! is split off before solving and added back afterwards; that keeps
//! linear inputs exact fixed points at any lambda and bounds the solve by
//! the size of the detrended remainder. The residual `y - x` of the exact
//! solution is orthogonal to constants (row sums of the system matrix are
//! one), and the computed cycle is rebalanced to sum to zero, which
//! removes the mean component of the solver error.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::DenseMatrix;
use crate::scalar::{fl, fl_usize, Scalar};

/// Conventional smoothing parameter for quarterly observations. Users
/// with other sampling frequencies should rescale it themselves; no
/// particular frequency is assumed anywhere in this module.
pub const DEFAULT_HP_LAMBDA: f64 = 1600.0;

#[derive(Debug, Error)]
pub enum HpError {
    #[error("series value at index {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("series must contain at least one value")]
    EmptySeries,
    #[error("smoothing parameter must be finite and nonnegative, got {value}")]
    InvalidLambda { value: f64 },
    #[error("fisher_z requires |rho| < 1, got {rho}")]
    FisherDomain { rho: f64 },
    #[error("rolling window must cover at least 3 observations, got {window}")]
    WindowTooSmall { window: usize },
    #[error("rolling window of {window} exceeds the {n} available observations")]
    WindowExceedsSample { window: usize, n: usize },
    #[error("mean off-diagonal correlation needs at least 2 rows, got {p}")]
    TooFewRows { p: usize },
}

/// Finite-valued series with a display label. May be empty: difference
/// operators legitimately produce zero-length outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries<F> {
    values: Vec<F>,
    label: String,
}

impl<F: Scalar> TimeSeries<F> {
    pub fn new(values: Vec<F>, label: impl Into<String>) -> Result<Self, HpError> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(HpError::NonFiniteValue { index });
        }
        Ok(Self { values, label: label.into() })
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Result of [`hp_filter`]: `trend + cycle` reproduces the input
/// entrywise and the cycle sums to zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HPDecomposition<F> {
    pub trend: TimeSeries<F>,
    pub cycle: TimeSeries<F>,
    pub lambda: F,
}

/// `(1/2) log((1+rho)/(1-rho))`, the area hyperbolic tangent: an odd,
/// strictly increasing bijection from (-1, 1) onto the reals.
pub fn fisher_z<F: Scalar>(rho: F) -> Result<F, HpError> {
    if !(rho.abs() < F::one()) {
        return Err(HpError::FisherDomain { rho: rho.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(rho.atanh())
}

/// Second-difference sequence `x_j - 2 x_{j+1} + x_{j+2}`; empty for
/// inputs shorter than 3.
pub fn second_difference<F: Scalar>(x: &TimeSeries<F>) -> TimeSeries<F> {
    let v = x.values();
    let two = fl::<F>(2.0);
    let values = if v.len() < 3 {
        Vec::new()
    } else {
        v.windows(3).map(|w| w[0] - two * w[1] + w[2]).collect()
    };
    TimeSeries { values, label: x.label.clone() }
}

/// Hodrick-Prescott decomposition with smoothing parameter `lambda`.
pub fn hp_filter<F: Scalar>(y: &TimeSeries<F>, lambda: F) -> Result<HPDecomposition<F>, HpError> {
    if y.is_empty() {
        return Err(HpError::EmptySeries);
    }
    if !(lambda.is_finite() && lambda >= F::zero()) {
        return Err(HpError::InvalidLambda { value: lambda.to_f64().unwrap_or(f64::NAN) });
    }
    let n = y.len();
    // fewer than 3 points admit no second difference, so the penalty
    // vanishes and the objective is minimized by the input itself
    if lambda == F::zero() || n < 3 {
        let trend = TimeSeries::new(y.values.clone(), format!("{} trend", y.label))?;
        let cycle = TimeSeries::new(vec![F::zero(); n], format!("{} cycle", y.label))?;
        return Ok(HPDecomposition { trend, cycle, lambda });
    }

    let (line, detrended) = split_least_squares_line(&y.values);
    let mut trend = solve_penalized(&detrended, lambda)?;

    // the exact solution inherits the mean of its input; subtracting the
    // observed mean error makes the cycle sum to zero
    let mean_error = detrended
        .iter()
        .zip(&trend)
        .map(|(&d, &t)| d - t)
        .fold(F::zero(), |a, b| a + b)
        / fl_usize::<F>(n);
    for t in &mut trend {
        *t += mean_error;
    }

    let trend: Vec<F> = line.iter().zip(&trend).map(|(&l, &t)| l + t).collect();
    let cycle: Vec<F> = y.values.iter().zip(&trend).map(|(&v, &t)| v - t).collect();
    Ok(HPDecomposition {
        trend: TimeSeries::new(trend, format!("{} trend", y.label))?,
        cycle: TimeSeries::new(cycle, format!("{} cycle", y.label))?,
        lambda,
    })
}

/// Least-squares line through the points `(j, y_j)` and the residual
/// around it. Uses the centered closed form, so the two returned parts
/// sum to the input exactly up to round-off.
fn split_least_squares_line<F: Scalar>(y: &[F]) -> (Vec<F>, Vec<F>) {
    let n = y.len();
    let nf = fl_usize::<F>(n);
    let mean_t = (nf - F::one()) / fl(2.0);
    let mean_y = y.iter().fold(F::zero(), |a, &b| a + b) / nf;
    let mut cov = F::zero();
    let mut var = F::zero();
    for (j, &v) in y.iter().enumerate() {
        let dt = fl_usize::<F>(j) - mean_t;
        cov += dt * (v - mean_y);
        var += dt * dt;
    }
    let slope = if var > F::zero() { cov / var } else { F::zero() };
    let line: Vec<F> = (0..n)
        .map(|j| mean_y + slope * (fl_usize::<F>(j) - mean_t))
        .collect();
    let residual = y.iter().zip(&line).map(|(&v, &l)| v - l).collect();
    (line, residual)
}

/// Solves `(I + lambda D^T D) x = y` by a banded Cholesky factorization
/// of the symmetric pentadiagonal system matrix; n >= 3.
fn solve_penalized<F: Scalar>(y: &[F], lambda: F) -> Result<Vec<F>, HpError> {
    let n = y.len();
    let mut diag = vec![F::zero(); n];
    let mut sub1 = vec![F::zero(); n - 1];
    let mut sub2 = vec![F::zero(); n - 2];
    let (one, two, four) = (F::one(), fl::<F>(2.0), fl::<F>(4.0));
    // accumulate D^T D from the rows (1, -2, 1) of D
    for m in 0..n - 2 {
        diag[m] += one;
        diag[m + 1] += four;
        diag[m + 2] += one;
        sub1[m] -= two;
        sub1[m + 1] -= two;
        sub2[m] += one;
    }
    for d in &mut diag {
        *d = one + lambda * *d;
    }
    for s in &mut sub1 {
        *s = lambda * *s;
    }
    for s in &mut sub2 {
        *s = lambda * *s;
    }
    if diag.iter().any(|d| !d.is_finite()) {
        return Err(HpError::InvalidLambda { value: lambda.to_f64().unwrap_or(f64::NAN) });
    }

    // lower-bandwidth-2 Cholesky; the matrix is I plus a positive
    // semidefinite term, so every pivot is at least 1
    let mut l0 = vec![F::zero(); n];
    let mut l1 = vec![F::zero(); n.saturating_sub(1)];
    let mut l2 = vec![F::zero(); n.saturating_sub(2)];
    for j in 0..n {
        let mut pivot = diag[j];
        if j >= 1 {
            pivot -= l1[j - 1] * l1[j - 1];
        }
        if j >= 2 {
            pivot -= l2[j - 2] * l2[j - 2];
        }
        l0[j] = pivot.sqrt();
        if j + 1 < n {
            let mut v = sub1[j];
            if j >= 1 {
                v -= l2[j - 1] * l1[j - 1];
            }
            l1[j] = v / l0[j];
        }
        if j + 2 < n {
            l2[j] = sub2[j] / l0[j];
        }
    }

    let mut z = vec![F::zero(); n];
    for j in 0..n {
        let mut v = y[j];
        if j >= 1 {
            v -= l1[j - 1] * z[j - 1];
        }
        if j >= 2 {
            v -= l2[j - 2] * z[j - 2];
        }
        z[j] = v / l0[j];
    }
    let mut x = vec![F::zero(); n];
    for j in (0..n).rev() {
        let mut v = z[j];
        if j + 1 < n {
            v -= l1[j] * x[j + 1];
        }
        if j + 2 < n {
            v -= l2[j] * x[j + 2];
        }
        x[j] = v / l0[j];
    }
    Ok(x)
}

/// Rolling mean off-diagonal entry of the windowed data-centered sample
/// correlation matrix. Entry w covers columns `w .. w + window`; a window
/// containing a constant row has no defined correlation and yields
/// `None`.
pub fn rolling_equicorr<F: Scalar>(
    x: &DenseMatrix<F>,
    window: usize,
) -> Result<Vec<Option<F>>, HpError> {
    let p = x.rows();
    let n = x.cols();
    if p < 2 {
        return Err(HpError::TooFewRows { p });
    }
    if window < 3 {
        return Err(HpError::WindowTooSmall { window });
    }
    if window > n {
        return Err(HpError::WindowExceedsSample { window, n });
    }
    let wf = fl_usize::<F>(window);
    let pf = fl_usize::<F>(p);
    let mut out = Vec::with_capacity(n - window + 1);
    let mut z = vec![F::zero(); window];
    let mut col_sums = vec![F::zero(); window];
    'windows: for start in 0..=n - window {
        for s in &mut col_sums {
            *s = F::zero();
        }
        for i in 0..p {
            let row = &x.row(i)[start..start + window];
            let mean = row.iter().fold(F::zero(), |a, &b| a + b) / wf;
            let mut norm_sq = F::zero();
            for (zj, &v) in z.iter_mut().zip(row) {
                *zj = v - mean;
                norm_sq += *zj * *zj;
            }
            if !(norm_sq > F::zero()) {
                out.push(None);
                continue 'windows;
            }
            let inv_norm = norm_sq.sqrt().recip();
            for (s, &zj) in col_sums.iter_mut().zip(z.iter()) {
                *s += zj * inv_norm;
            }
        }
        // mean off-diagonal of C = Z Z^T with unit rows z_i equals
        // (||sum_i z_i||^2 - p) / (p (p - 1))
        let total = col_sums.iter().fold(F::zero(), |a, &s| a + s * s);
        out.push(Some((total - pf) / (pf * (pf - F::one()))));
    }
    Ok(out)
}

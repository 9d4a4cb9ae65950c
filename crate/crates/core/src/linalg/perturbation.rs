//! Executable singular-value perturbation inequalities.
//!
//! Two bounds are checked numerically on concrete matrices:
//! multiplicative, `low(A) * s_i(B) <= s_i(AB) <= s_1(A) * s_i(B)`, and
//! additive, `|s_i(A+B) - s_i(A)| <= s_1(B)`.
//!
//! The multiplicative lower factor `low(A)` is the smallest singular
//! value of `A` when `A` has at least as many rows as columns, and zero
//! otherwise: for a wide matrix the product `AB` can annihilate
//! directions no matter how well-conditioned `A` is (take a row vector
//! `A` and a `B` orthogonal to it), so only the vacuous bound is valid
//! there. Tall or square full-rank `A` gives the informative bound.

use serde::Serialize;

use super::eigen::sym_eigvals;
use super::matrix::DenseMatrix;
use super::svd::singular_values;
use super::LinalgError;
use crate::scalar::{fl, Scalar};

/// Default relative slack absorbing round-off in the compared singular
/// values.
pub const PERTURBATION_REL_SLACK: f64 = 1e-9;

/// One inequality failure: index is 1-based to match the `s_i` naming.
#[derive(Debug, Clone, Serialize)]
pub struct BoundViolation {
    pub index: usize,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

/// Outcome of checking a perturbation inequality over a whole spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationReport {
    /// Number of singular-value indices checked.
    pub checked: usize,
    /// Indices where a bound failed beyond the slack.
    pub violations: Vec<BoundViolation>,
    /// Worst relative excursion beyond a bound (0 when all bounds hold).
    pub max_rel_violation: f64,
}

impl PerturbationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `low(A) * s_i(B) <= s_i(AB) <= s_1(A) * s_i(B)` for every
/// `i = 1..=min(dims of AB)` with relative slack
/// [`PERTURBATION_REL_SLACK`].
pub fn check_mult_perturbation<F: Scalar>(
    a: &DenseMatrix<F>,
    b: &DenseMatrix<F>,
) -> Result<PerturbationReport, LinalgError> {
    if a.cols() != b.rows() {
        return Err(LinalgError::ProductShapeMismatch {
            left: (a.rows(), a.cols()),
            right: (b.rows(), b.cols()),
        });
    }
    let sa = singular_values(a)?;
    let sb = singular_values(b)?;
    let sab = singular_values(&a.matmul(b)?)?;

    let s1_a = sa.top();
    let low_a = if a.rows() >= a.cols() {
        *sa.values().last().expect("spectrum nonempty")
    } else {
        F::zero()
    };

    let slack = fl::<F>(PERTURBATION_REL_SLACK);
    let mut violations = Vec::new();
    let mut max_rel = F::zero();
    for (idx, &mid) in sab.values().iter().enumerate() {
        // s_i(B) is zero past B's rank budget; never past AB's length.
        let sib = sb.values().get(idx).copied().unwrap_or(F::zero());
        let lower = low_a * sib;
        let upper = s1_a * sib;
        let scale = F::one() + lower.abs().max(upper.abs()).max(mid.abs());
        let below = (lower - mid).max(F::zero()) / scale;
        let above = (mid - upper).max(F::zero()) / scale;
        let excess = below.max(above);
        if excess > slack {
            violations.push(BoundViolation {
                index: idx + 1,
                lower: lower.to_f64().unwrap_or(f64::NAN),
                value: mid.to_f64().unwrap_or(f64::NAN),
                upper: upper.to_f64().unwrap_or(f64::NAN),
            });
        }
        max_rel = max_rel.max(excess);
    }
    Ok(PerturbationReport {
        checked: sab.len(),
        violations,
        max_rel_violation: max_rel.to_f64().unwrap_or(f64::NAN),
    })
}

/// Checks `|s_i(A+B) - s_i(A)| <= s_1(B)` for every `i` with relative
/// slack [`PERTURBATION_REL_SLACK`].
pub fn check_additive_perturbation<F: Scalar>(
    a: &DenseMatrix<F>,
    b: &DenseMatrix<F>,
) -> Result<PerturbationReport, LinalgError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(LinalgError::ProductShapeMismatch {
            left: (a.rows(), a.cols()),
            right: (b.rows(), b.cols()),
        });
    }
    let sa = singular_values(a)?;
    let ssum = singular_values(&a.add(b)?)?;
    let s1_b = singular_values(b)?.top();

    let slack = fl::<F>(PERTURBATION_REL_SLACK);
    let mut violations = Vec::new();
    let mut max_rel = F::zero();
    for (idx, (&si_sum, &si_a)) in ssum.values().iter().zip(sa.values().iter()).enumerate() {
        let gap = (si_sum - si_a).abs();
        let scale = F::one() + s1_b.abs().max(gap);
        let excess = (gap - s1_b).max(F::zero()) / scale;
        if excess > slack {
            violations.push(BoundViolation {
                index: idx + 1,
                lower: -s1_b.to_f64().unwrap_or(f64::NAN),
                value: (si_sum - si_a).to_f64().unwrap_or(f64::NAN),
                upper: s1_b.to_f64().unwrap_or(f64::NAN),
            });
        }
        max_rel = max_rel.max(excess);
    }
    Ok(PerturbationReport {
        checked: ssum.len(),
        violations,
        max_rel_violation: max_rel.to_f64().unwrap_or(f64::NAN),
    })
}

/// Checks Weyl's bound `lambda_{i+j-1}(N + H) <= lambda_i(N) + lambda_j(H)`
/// for symmetric matrices, exhaustively over valid 1-based `(i, j)`, with
/// relative slack [`PERTURBATION_REL_SLACK`].
///
/// A violation's `index` is `i + j - 1`; its `lower` is meaningless for
/// this one-sided bound and set to negative infinity.
pub fn check_weyl<F: Scalar>(
    n: &DenseMatrix<F>,
    h: &DenseMatrix<F>,
) -> Result<PerturbationReport, LinalgError> {
    if n.rows() != h.rows() || n.cols() != h.cols() {
        return Err(LinalgError::ProductShapeMismatch {
            left: (n.rows(), n.cols()),
            right: (h.rows(), h.cols()),
        });
    }
    let en = sym_eigvals(n)?;
    let eh = sym_eigvals(h)?;
    let esum = sym_eigvals(&n.add(h)?)?;
    let order = esum.len();

    let slack = fl::<F>(PERTURBATION_REL_SLACK);
    let mut violations = Vec::new();
    let mut max_rel = F::zero();
    let mut checked = 0;
    for i in 1..=order {
        for j in 1..=(order + 1 - i) {
            checked += 1;
            let bound = en.values()[i - 1] + eh.values()[j - 1];
            let value = esum.values()[i + j - 2];
            let scale = F::one() + bound.abs().max(value.abs());
            let excess = (value - bound).max(F::zero()) / scale;
            if excess > slack {
                violations.push(BoundViolation {
                    index: i + j - 1,
                    lower: f64::NEG_INFINITY,
                    value: value.to_f64().unwrap_or(f64::NAN),
                    upper: bound.to_f64().unwrap_or(f64::NAN),
                });
            }
            max_rel = max_rel.max(excess);
        }
    }
    Ok(PerturbationReport {
        checked,
        violations,
        max_rel_violation: max_rel.to_f64().unwrap_or(f64::NAN),
    })
}

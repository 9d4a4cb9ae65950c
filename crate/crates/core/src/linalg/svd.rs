//! Singular values via Householder bidiagonalization followed by QR
//! iterations on the bidiagonal form (Golub-Reinsch), values only.
//!
//! This route is independent of the symmetric eigensolver, so the
//! documented relationship s_i(A)^2 = lambda_i(A A^T) is a genuine
//! cross-check between two algorithms rather than a tautology.

use super::matrix::DenseMatrix;
use super::spectrum::{Spectrum, SpectrumKind};
use super::LinalgError;
use crate::scalar::Scalar;

const MAX_QR_ITERATIONS: usize = 75;

/// All `min(rows, cols)` singular values of `A`, descending.
///
/// Rejects the degenerate 1x1 case; empty dimensions cannot occur by
/// the [`DenseMatrix`] invariants.
pub fn singular_values<F: Scalar>(a: &DenseMatrix<F>) -> Result<Spectrum<F>, LinalgError> {
    if a.rows() == 1 && a.cols() == 1 {
        return Err(LinalgError::DegenerateOrder { order: 1 });
    }
    // Bidiagonalization below assumes rows >= cols; singular values are
    // transpose-invariant.
    let work = if a.rows() >= a.cols() { a.clone() } else { a.transpose() };
    let values = golub_reinsch_values(work)?;
    Ok(Spectrum::from_sorted_unchecked(
        values,
        SpectrumKind::SingularValues,
        a.rows(),
        a.cols(),
    ))
}

/// Largest singular value of `A`.
pub fn spectral_norm<F: Scalar>(a: &DenseMatrix<F>) -> Result<F, LinalgError> {
    Ok(singular_values(a)?.top())
}

#[inline]
fn same_sign<F: Scalar>(magnitude: F, sign_of: F) -> F {
    if sign_of >= F::zero() {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

/// Values-only Golub-Reinsch on a tall matrix (rows >= cols). Consumes
/// the working copy.
fn golub_reinsch_values<F: Scalar>(mut a: DenseMatrix<F>) -> Result<Vec<F>, LinalgError> {
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n);
    let eps = F::epsilon();

    let mut w = vec![F::zero(); n];
    let mut rv1 = vec![F::zero(); n];

    // Householder reduction to upper bidiagonal form: w holds the
    // diagonal, rv1 the superdiagonal (rv1[0] stays zero).
    let mut g = F::zero();
    let mut anorm = F::zero();
    for i in 0..n {
        let l = i + 1;
        rv1[i] = g;
        g = F::zero();

        // Column transform on a[i.., i].
        let mut scale = F::zero();
        for k in i..m {
            scale += a.get(k, i).abs();
        }
        if scale > F::zero() {
            let mut s = F::zero();
            for k in i..m {
                let v = a.get(k, i) / scale;
                a.set(k, i, v);
                s += v * v;
            }
            let f = a.get(i, i);
            g = -same_sign(s.sqrt(), f);
            let h = f * g - s;
            a.set(i, i, f - g);
            for j in l..n {
                let mut s = F::zero();
                for k in i..m {
                    s += a.get(k, i) * a.get(k, j);
                }
                let f = s / h;
                for k in i..m {
                    let v = a.get(k, j) + f * a.get(k, i);
                    a.set(k, j, v);
                }
            }
            for k in i..m {
                a.set(k, i, a.get(k, i) * scale);
            }
            g *= scale;
        }
        w[i] = g;

        // Row transform on a[i, l..].
        g = F::zero();
        if i < m && l < n {
            let mut scale = F::zero();
            for k in l..n {
                scale += a.get(i, k).abs();
            }
            if scale > F::zero() {
                let mut s = F::zero();
                for k in l..n {
                    let v = a.get(i, k) / scale;
                    a.set(i, k, v);
                    s += v * v;
                }
                let f = a.get(i, l);
                g = -same_sign(s.sqrt(), f);
                let h = f * g - s;
                a.set(i, l, f - g);
                let rv_tail: Vec<F> = (l..n).map(|k| a.get(i, k) / h).collect();
                for j in l..m {
                    let mut s = F::zero();
                    for k in l..n {
                        s += a.get(j, k) * a.get(i, k);
                    }
                    for (k, rv) in (l..n).zip(rv_tail.iter()) {
                        let v = a.get(j, k) + s * *rv;
                        a.set(j, k, v);
                    }
                }
                for k in l..n {
                    a.set(i, k, a.get(i, k) * scale);
                }
                g *= scale;
            }
        }
        anorm = anorm.max(w[i].abs() + rv1[i].abs());
    }

    // QR diagonalization of the bidiagonal form.
    for k in (0..n).rev() {
        let mut iterations = 0;
        loop {
            iterations += 1;
            if iterations > MAX_QR_ITERATIONS {
                return Err(LinalgError::SvdNoConvergence { index: k });
            }

            // Split test: find l with negligible rv1[l], or negligible
            // w[l-1] (which triggers a cancellation sweep).
            let mut l = k;
            let mut flag = true;
            loop {
                if rv1[l].abs() <= eps * anorm {
                    flag = false;
                    break;
                }
                // rv1[0] is always zero, so l >= 1 here.
                if w[l - 1].abs() <= eps * anorm {
                    break;
                }
                l -= 1;
            }

            if flag {
                // Cancel rv1[l] against the negligible w[l-1].
                let mut c = F::zero();
                let mut s = F::one();
                for i in l..=k {
                    let f = s * rv1[i];
                    rv1[i] = c * rv1[i];
                    if f.abs() <= eps * anorm {
                        break;
                    }
                    let gg = w[i];
                    let h = f.hypot(gg);
                    w[i] = h;
                    let inv = F::one() / h;
                    c = gg * inv;
                    s = -f * inv;
                }
            }

            let z = w[k];
            if l == k {
                if z < F::zero() {
                    w[k] = -z;
                }
                break;
            }

            // Shift from the trailing 2x2 minor, then a sweep of Givens
            // rotations chasing the bulge.
            let x = w[l];
            let nm = k - 1;
            let y = w[nm];
            let mut gg = rv1[nm];
            let mut h = rv1[k];
            let mut f = ((y - z) * (y + z) + (gg - h) * (gg + h)) / ((F::one() + F::one()) * h * y);
            gg = f.hypot(F::one());
            f = ((x - z) * (x + z) + h * (y / (f + same_sign(gg, f)) - h)) / x;

            let mut c = F::one();
            let mut s = F::one();
            let mut x = x;
            for j in l..=nm {
                let i = j + 1;
                gg = rv1[i];
                let mut y = w[i];
                h = s * gg;
                gg = c * gg;
                let mut z = f.hypot(h);
                rv1[j] = z;
                c = f / z;
                s = h / z;
                f = x * c + gg * s;
                gg = gg * c - x * s;
                h = y * s;
                y *= c;
                z = f.hypot(h);
                w[j] = z;
                if z != F::zero() {
                    let inv = F::one() / z;
                    c = f * inv;
                    s = h * inv;
                }
                f = c * gg + s * y;
                x = c * y - s * gg;
            }
            rv1[l] = F::zero();
            rv1[k] = f;
            w[k] = x;
        }
    }

    w.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    Ok(w)
}

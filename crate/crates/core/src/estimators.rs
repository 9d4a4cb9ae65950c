//! Component-retention estimators operating on correlation spectra: the
//! broken-stick rule, adjusted correlation thresholding, the Bai-Ng
//! information criterion, and a Gershgorin-type lower-bound diagnostic
//! for loading-matrix Gram gaps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{sym_eigvals, DenseMatrix, LinalgError, Spectrum};
use crate::sample_stats::{sample_matrices, Centering, StatsError};
use crate::scalar::{fl, fl_usize, Scalar};

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("dimension p must be at least 1")]
    ZeroDimension,
    #[error("spectrum has {len} values but the stated dimension is p={p}")]
    SpectrumLongerThanP { len: usize, p: usize },
    #[error("need n >= 2 observations, got {n}")]
    SampleTooSmall { n: usize },
    #[error("k_max={k_max} exceeds min(p,n)/2 = {limit}")]
    KMaxTooLarge { k_max: usize, limit: usize },
    #[error("column {col} of the loading matrix is zero")]
    ZeroColumn { col: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Broken-stick thresholds `t_i = sum_{j=i}^{p} 1/j` for i = 1..p.
///
/// The thresholds partition total mass p, mirroring `trace(C) = p`, so a
/// flat correlation spectrum never crosses them.
#[derive(Debug, Clone, Serialize)]
pub struct BrokenStickThresholds<F> {
    p: usize,
    t: Vec<F>,
}

impl<F: Scalar> BrokenStickThresholds<F> {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn values(&self) -> &[F] {
        &self.t
    }
}

/// Backward-accumulated partial harmonic sums with Kahan compensation.
///
/// Compensation keeps each threshold within a couple of ulps of the exact
/// partial sum, so the whole vector sums to p with error about
/// `2 eps p` even at p = 10^5.
pub fn broken_stick_thresholds<F: Scalar>(
    p: usize,
) -> Result<BrokenStickThresholds<F>, EstimatorError> {
    if p == 0 {
        return Err(EstimatorError::ZeroDimension);
    }
    let mut t = vec![F::zero(); p];
    let mut acc = F::zero();
    let mut comp = F::zero();
    for i in (0..p).rev() {
        let term = F::one() / fl_usize::<F>(i + 1) - comp;
        let next = acc + term;
        comp = (next - acc) - term;
        acc = next;
        t[i] = acc;
    }
    Ok(BrokenStickThresholds { p, t })
}

/// Expected sorted piece lengths of a uniform random partition of [0, 1]
/// into p pieces: the k-th longest has mean `(1/p) sum_{j=k}^p 1/j`.
pub fn holst_expected_lengths<F: Scalar>(p: usize) -> Result<Vec<F>, EstimatorError> {
    let thresholds = broken_stick_thresholds::<F>(p)?;
    let scale = fl_usize::<F>(p);
    Ok(thresholds.t.iter().map(|&v| v / scale).collect())
}

/// Broken-stick rule: the retained count is `i - 1` for the lowest index
/// i (1-based) whose eigenvalue does not exceed its threshold, and p when
/// every eigenvalue stays above.
///
/// A spectrum shorter than p (rank deficiency when p > n) is padded with
/// zeros, which is the exact tail of a rank-deficient correlation matrix.
pub fn bs_rule<F: Scalar>(eigs: &Spectrum<F>, p: usize) -> Result<usize, EstimatorError> {
    let values = eigs.values();
    if values.len() > p {
        return Err(EstimatorError::SpectrumLongerThanP { len: values.len(), p });
    }
    let thresholds = broken_stick_thresholds::<F>(p)?;
    for (i, &t) in thresholds.t.iter().enumerate() {
        let lambda = values.get(i).copied().unwrap_or(F::zero());
        if lambda <= t {
            return Ok(i);
        }
    }
    Ok(p)
}

/// Adjusted correlation thresholding.
///
/// Each candidate eigenvalue is de-biased through the companion Stieltjes
/// transform of the remaining spectrum, in which the candidate itself is
/// replaced by the surrogate `(3 lambda_j + lambda_{j+1}) / 4`:
///
/// `m_j(z) = (1/(p-j)) [ sum_{k>j} 1/(lambda_k - z) + 1/(surrogate - z) ]`
/// `adjusted_j = -1 / ( -(1 - c_j)/z + c_j m_j(z) )` at `z = lambda_j`,
///
/// with `c_j = (p - j)/(n - 1)` the ratio of the remaining bulk. The
/// estimate is the number of adjusted eigenvalues above
/// `1 + sqrt(p/(n-1))`, the almost-sure bulk edge of a null correlation
/// spectrum.
pub fn act_estimate<F: Scalar>(
    eigs: &Spectrum<F>,
    p: usize,
    n: usize,
) -> Result<usize, EstimatorError> {
    let values = padded_values(eigs, p)?;
    if n < 2 {
        return Err(EstimatorError::SampleTooSmall { n });
    }
    let threshold = F::one() + (fl_usize::<F>(p) / fl_usize::<F>(n - 1)).sqrt();
    let four = fl::<F>(4.0);
    let three = fl::<F>(3.0);
    let mut count = 0;
    for j in 0..p.saturating_sub(1) {
        let z = values[j];
        if z <= F::zero() {
            break;
        }
        let remaining = p - (j + 1);
        let c_j = fl_usize::<F>(remaining) / fl_usize::<F>(n - 1);
        let surrogate = (three * values[j] + values[j + 1]) / four;
        let mut sum = (surrogate - z).recip();
        for &lambda in &values[j + 1..] {
            sum += (lambda - z).recip();
        }
        let m = sum / fl_usize::<F>(remaining);
        let m_companion = -(F::one() - c_j) / z + c_j * m;
        let adjusted = -m_companion.recip();
        if adjusted > threshold {
            count += 1;
        }
    }
    Ok(count)
}

/// Raw-threshold fallback: counts eigenvalues above `(1 + sqrt(p/(n-1)))^2`
/// without any bias adjustment.
pub fn act_threshold_only<F: Scalar>(
    eigs: &Spectrum<F>,
    p: usize,
    n: usize,
) -> Result<usize, EstimatorError> {
    let values = padded_values(eigs, p)?;
    if n < 2 {
        return Err(EstimatorError::SampleTooSmall { n });
    }
    let edge = F::one() + (fl_usize::<F>(p) / fl_usize::<F>(n - 1)).sqrt();
    let threshold = edge * edge;
    Ok(values.iter().take_while(|&&v| v > threshold).count())
}

fn padded_values<F: Scalar>(eigs: &Spectrum<F>, p: usize) -> Result<Vec<F>, EstimatorError> {
    let values = eigs.values();
    if values.len() > p {
        return Err(EstimatorError::SpectrumLongerThanP { len: values.len(), p });
    }
    let mut out = values.to_vec();
    out.resize(p, F::zero());
    Ok(out)
}

/// Penalty g(p, n) of the Bai-Ng information criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaiNgPenalty {
    /// `((p+n)/(pn)) log(pn/(p+n))`
    ICp1,
    /// `((p+n)/(pn)) log(min(p,n))`, the default
    ICp2,
    /// `log(min(p,n)) / min(p,n)`
    ICp3,
}

impl BaiNgPenalty {
    fn g(&self, p: usize, n: usize) -> f64 {
        let (pf, nf) = (p as f64, n as f64);
        let min_pn = pf.min(nf);
        match self {
            BaiNgPenalty::ICp1 => ((pf + nf) / (pf * nf)) * (pf * nf / (pf + nf)).ln(),
            BaiNgPenalty::ICp2 => ((pf + nf) / (pf * nf)) * min_pn.ln(),
            BaiNgPenalty::ICp3 => min_pn.ln() / min_pn,
        }
    }
}

/// Bai-Ng factor count with the default ICp2 penalty.
///
/// Rows are standardized to zero mean and unit sample variance first, so
/// the criterion operates on correlation-scale data.
pub fn bai_ng<F: Scalar>(x: &DenseMatrix<F>, k_max: usize) -> Result<usize, EstimatorError> {
    bai_ng_with_penalty(x, k_max, BaiNgPenalty::ICp2)
}

pub fn bai_ng_with_penalty<F: Scalar>(
    x: &DenseMatrix<F>,
    k_max: usize,
    penalty: BaiNgPenalty,
) -> Result<usize, EstimatorError> {
    let corr = sample_matrices(x, Centering::Data)?.corr;
    let eigs = sym_eigvals(&corr)?;
    bai_ng_from_spectrum(&eigs, x.rows(), x.cols(), k_max, penalty)
}

/// Bai-Ng on a precomputed correlation spectrum.
///
/// The mean squared residual after removing the top k principal
/// components of standardized data is proportional to the eigenvalue
/// tail sum `V(k) = (1/p) sum_{i>k} lambda_i`, so the criterion
/// `IC(k) = log V(k) + k g(p,n)` needs no eigenvectors. A tail of zero
/// means k components explain everything; such k wins immediately.
pub fn bai_ng_from_spectrum<F: Scalar>(
    eigs: &Spectrum<F>,
    p: usize,
    n: usize,
    k_max: usize,
    penalty: BaiNgPenalty,
) -> Result<usize, EstimatorError> {
    if n < 2 {
        return Err(EstimatorError::SampleTooSmall { n });
    }
    let limit = p.min(n) / 2;
    if k_max > limit {
        return Err(EstimatorError::KMaxTooLarge { k_max, limit });
    }
    let values = padded_values(eigs, p)?;
    let g = penalty.g(p, n);
    let mut best_k = 0;
    let mut best_ic = f64::INFINITY;
    let total: f64 = values.iter().map(|v| v.to_f64().unwrap_or(0.0)).sum();
    let mut head = 0.0f64;
    for k in 0..=k_max {
        let tail = total - head;
        let v_k = tail / p as f64;
        let ic = if v_k > 0.0 {
            v_k.ln() + k as f64 * g
        } else {
            f64::NEG_INFINITY
        };
        if ic < best_ic {
            best_ic = ic;
            best_k = k;
        }
        if k < values.len() {
            head += values[k].to_f64().unwrap_or(0.0);
        }
    }
    Ok(best_k)
}

/// Lower-bound diagnostic for the smallest active Gram eigenvalue of a
/// loading matrix.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VarahReport<F> {
    /// `min_k (1 - sum_{j != k} |cos(l_j, l_k)|) * min_k ||l_k||^2`,
    /// a Gershgorin-type lower bound on `lambda_K(L^T L)`. It can be
    /// negative, in which case it is vacuous.
    pub lower_bound: F,
    /// Whether the bound clears the caller's gap requirement `b_p`.
    pub passes: bool,
}

/// Evaluates the diagonal-dominance lower bound on the smallest
/// eigenvalue of `L^T L` against a required gap `b_p`.
pub fn varah_gap_diagnostic<F: Scalar>(
    l: &DenseMatrix<F>,
    b_p: F,
) -> Result<VarahReport<F>, EstimatorError> {
    let gram = l.transpose().gram_scaled(F::one());
    let k = gram.rows();
    for c in 0..k {
        if !(gram.get(c, c) > F::zero()) {
            return Err(EstimatorError::ZeroColumn { col: c });
        }
    }
    let mut min_gap = F::infinity();
    let mut min_norm_sq = F::infinity();
    for a in 0..k {
        let na = gram.get(a, a);
        min_norm_sq = min_norm_sq.min(na);
        let mut off = F::zero();
        for b in 0..k {
            if b != a {
                off += (gram.get(a, b) / (na * gram.get(b, b)).sqrt()).abs();
            }
        }
        min_gap = min_gap.min(F::one() - off);
    }
    let lower_bound = min_gap * min_norm_sq;
    Ok(VarahReport {
        lower_bound,
        passes: lower_bound > b_p,
    })
}

/// Per-dataset summary: dimensions, the top correlation eigenvalue scaled
/// by p, and the three retention estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub p: usize,
    pub n: usize,
    pub ratio: f64,
    pub lambda1_over_p: f64,
    pub bs: usize,
    pub act: usize,
    pub bai_ng: usize,
}

impl EstimatorReport {
    /// Aligned text table, one row per report, in the column order
    /// n, p/n, lambda1(C)/p, p, BS, ACT, Bai-Ng.
    pub fn render_table(reports: &[EstimatorReport]) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:>8}  {:>7}  {:>12}  {:>6}  {:>4}  {:>4}  {:>7}\n",
            "n", "p/n", "lambda1(C)/p", "p", "BS", "ACT", "Bai-Ng"
        ));
        for r in reports {
            out.push_str(&format!(
                "{:>8}  {:>7.3}  {:>12.3}  {:>6}  {:>4}  {:>4}  {:>7}\n",
                r.n, r.ratio, r.lambda1_over_p, r.p, r.bs, r.act, r.bai_ng
            ));
        }
        out
    }
}

/// Runs all three estimators on one dataset (columns are observations)
/// and assembles the report. The correlation matrix is computed once and
/// shared.
pub fn estimator_report<F: Scalar>(
    x: &DenseMatrix<F>,
    k_max: usize,
    threshold_only: bool,
) -> Result<EstimatorReport, EstimatorError> {
    let p = x.rows();
    let n = x.cols();
    let corr = sample_matrices(x, Centering::Data)?.corr;
    let eigs = sym_eigvals(&corr)?;
    let act = if threshold_only {
        act_threshold_only(&eigs, p, n)?
    } else {
        act_estimate(&eigs, p, n)?
    };
    Ok(EstimatorReport {
        p,
        n,
        ratio: p as f64 / n as f64,
        lambda1_over_p: eigs.top().to_f64().unwrap_or(f64::NAN) / p as f64,
        bs: bs_rule(&eigs, p)?,
        act,
        bai_ng: bai_ng_from_spectrum(&eigs, p, n, k_max, BaiNgPenalty::ICp2)?,
    })
}

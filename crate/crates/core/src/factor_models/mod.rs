//! Population-side description of K-factor observation models and the
//! sampling routine that turns a model into a finite dataset.
//!
//! An observation vector is `x = mu + L f + Lambda psi` where `f` holds K
//! independent standardized factor draws and `psi` holds p independent
//! standardized noise draws. The population covariance is therefore
//! `Sigma = L L^T + Lambda Lambda^T`. Every constructor enforces the
//! identifiability condition that no row of the combined coefficient block
//! `[L Lambda]` vanishes, so population variances are strictly positive and
//! the correlation matrix is always defined.

mod config;

pub use config::{ModelConfig, ModelFamily};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{DenseMatrix, LinalgError};
use crate::scalar::{fl, fl_usize, Scalar};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parameter `{name}` must be strictly positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("parameter `{name}` must be nonnegative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("dimension p must be at least {min}, got {p}")]
    DimensionTooSmall { p: usize, min: usize },
    #[error("factor count K must be at least {min}, got {k}")]
    FactorCountTooSmall { k: usize, min: usize },
    #[error("rank r={r} must satisfy 1 <= r <= K={k} and r <= p={p}")]
    InvalidRank { r: usize, k: usize, p: usize },
    #[error("student_t requires df > 4 so fourth moments exist, got df={df}")]
    InvalidDegreesOfFreedom { df: f64 },
    #[error("mean vector has length {actual}, expected p={expected}")]
    MeanLengthMismatch { expected: usize, actual: usize },
    #[error("loading matrix is {rows}x{cols}, expected {p}x{k}")]
    LoadingShapeMismatch { rows: usize, cols: usize, p: usize, k: usize },
    #[error("noise coefficient is {rows}x{cols}, expected {p}x{p}")]
    NoiseShapeMismatch { rows: usize, cols: usize, p: usize },
    #[error("diagonal noise coefficient has length {actual}, expected p={expected}")]
    NoiseLengthMismatch { expected: usize, actual: usize },
    #[error("row {row} of the combined coefficient block [L Lambda] is zero")]
    ZeroCoefficientRow { row: usize },
    #[error("`{field}` contains a non-finite value at index {index}")]
    NonFiniteValue { field: &'static str, index: usize },
    #[error("sample size n must be at least 2, got {n}")]
    SampleSizeTooSmall { n: usize },
    #[error("limiting loading vector must have length K={k}, got {actual}")]
    LimitVectorLengthMismatch { k: usize, actual: usize },
    #[error("model configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Standardized scalar distribution used for factor and noise draws.
///
/// Each tag samples with mean zero and unit variance. `StudentT` rescales the
/// raw variate by `sqrt((df - 2) / df)` and requires `df > 4` so that the
/// fourth moment is finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionTag {
    StandardNormal,
    Rademacher,
    StudentT { df: f64 },
}

impl DistributionTag {
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            DistributionTag::StudentT { df } if !(*df > 4.0) => {
                Err(ModelError::InvalidDegreesOfFreedom { df: *df })
            }
            _ => Ok(()),
        }
    }

    /// Draws one standardized variate. Sampling is always done in f64 and
    /// converted afterwards so that f32 and f64 models consume the generator
    /// stream identically.
    pub fn draw<F: Scalar, R: Rng>(&self, rng: &mut R) -> F {
        let x: f64 = match self {
            DistributionTag::StandardNormal => StandardNormal.sample(rng),
            DistributionTag::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            DistributionTag::StudentT { df } => {
                let t: f64 = StudentT::new(*df).expect("df validated at construction").sample(rng);
                t * ((df - 2.0) / df).sqrt()
            }
        };
        fl(x)
    }

    /// Bulk variant of `draw` that hoists the distribution setup out of the
    /// loop; consumes the generator stream identically to repeated `draw`.
    fn fill<F: Scalar, R: Rng>(&self, rng: &mut R, out: &mut [F]) {
        match self {
            DistributionTag::StandardNormal => {
                for slot in out.iter_mut() {
                    let x: f64 = StandardNormal.sample(rng);
                    *slot = fl(x);
                }
            }
            DistributionTag::Rademacher => {
                for slot in out.iter_mut() {
                    *slot = if rng.random::<bool>() { F::one() } else { -F::one() };
                }
            }
            DistributionTag::StudentT { df } => {
                let dist = StudentT::new(*df).expect("df validated at construction");
                let scale = ((df - 2.0) / df).sqrt();
                for slot in out.iter_mut() {
                    *slot = fl(dist.sample(rng) * scale);
                }
            }
        }
    }
}

impl fmt::Display for DistributionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionTag::StandardNormal => write!(f, "standard_normal"),
            DistributionTag::Rademacher => write!(f, "rademacher"),
            DistributionTag::StudentT { df } => write!(f, "student_t(df={df})"),
        }
    }
}

/// Noise coefficient `Lambda`, stored sparsely when diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    rename_all = "snake_case",
    bound(deserialize = "F: Scalar + Deserialize<'de>")
)]
pub enum NoiseCoeff<F> {
    /// Diagonal `Lambda` given by its diagonal entries.
    Diagonal(Vec<F>),
    /// General square `Lambda`.
    Full(DenseMatrix<F>),
}

impl<F: Scalar> NoiseCoeff<F> {
    fn row_sq_norm(&self, i: usize) -> F {
        match self {
            NoiseCoeff::Diagonal(d) => d[i] * d[i],
            NoiseCoeff::Full(m) => m.row(i).iter().map(|&x| x * x).sum(),
        }
    }
}

/// Full description of a K-factor model: mean, loading matrix, noise
/// coefficient, and the distributions driving the draws.
///
/// `loading` is `None` exactly when `K = 0`, in which case observations are
/// pure noise `mu + Lambda psi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawFactorModelSpec<F>",
    bound(deserialize = "F: Scalar + Deserialize<'de>")
)]
pub struct FactorModelSpec<F> {
    p: usize,
    k: usize,
    mu: Vec<F>,
    loading: Option<DenseMatrix<F>>,
    noise: NoiseCoeff<F>,
    factor_dist: DistributionTag,
    noise_dist: DistributionTag,
}

/// Deserialization staging type; decoded specs re-run full validation.
#[derive(Deserialize)]
#[serde(bound(deserialize = "F: Scalar + Deserialize<'de>"))]
struct RawFactorModelSpec<F> {
    p: usize,
    k: usize,
    mu: Vec<F>,
    loading: Option<DenseMatrix<F>>,
    noise: NoiseCoeff<F>,
    factor_dist: DistributionTag,
    noise_dist: DistributionTag,
}

impl<F: Scalar> TryFrom<RawFactorModelSpec<F>> for FactorModelSpec<F> {
    type Error = ModelError;

    fn try_from(raw: RawFactorModelSpec<F>) -> Result<Self, Self::Error> {
        let spec = FactorModelSpec::new(
            raw.p,
            raw.mu,
            raw.loading,
            raw.noise,
            raw.factor_dist,
            raw.noise_dist,
        )?;
        if raw.k != spec.k {
            return Err(ModelError::Config(format!(
                "stored factor count {} disagrees with loading shape giving K={}",
                raw.k, spec.k
            )));
        }
        Ok(spec)
    }
}

/// Summary quantities of a model's population covariance structure.
#[derive(Debug, Clone, Serialize)]
pub struct ModelDiagnostics<F> {
    /// Common correlation of the first coordinate pair under the
    /// equal-row-norm forms: `||l_1||^2 / (||l_1||^2 + ||lambda_1||^2)`
    /// where `l_1` and `lambda_1` are the first rows of `L` and `Lambda`.
    pub rho: F,
    /// Rank of the loading matrix, at most K.
    pub rank_l: usize,
    /// Nonzero eigenvalues of `L^T L` in descending order.
    pub nonzero_eigs_ltl: Vec<F>,
    /// Smallest and largest row norms of `L` (both zero when K = 0).
    pub row_norm_min: F,
    pub row_norm_max: F,
}

impl<F: Scalar> FactorModelSpec<F> {
    /// Validates shapes, distribution parameters, and the requirement that
    /// every row of `[L Lambda]` is nonzero.
    pub fn new(
        p: usize,
        mu: Vec<F>,
        loading: Option<DenseMatrix<F>>,
        noise: NoiseCoeff<F>,
        factor_dist: DistributionTag,
        noise_dist: DistributionTag,
    ) -> Result<Self, ModelError> {
        if p == 0 {
            return Err(ModelError::DimensionTooSmall { p, min: 1 });
        }
        if mu.len() != p {
            return Err(ModelError::MeanLengthMismatch { expected: p, actual: mu.len() });
        }
        if let Some(pos) = mu.iter().position(|x| !x.is_finite()) {
            return Err(ModelError::NonFiniteValue { field: "mu", index: pos });
        }
        if let NoiseCoeff::Diagonal(d) = &noise {
            if let Some(pos) = d.iter().position(|x| !x.is_finite()) {
                return Err(ModelError::NonFiniteValue { field: "noise diagonal", index: pos });
            }
        }
        let k = match &loading {
            Some(l) => {
                if l.rows() != p {
                    return Err(ModelError::LoadingShapeMismatch {
                        rows: l.rows(),
                        cols: l.cols(),
                        p,
                        k: l.cols(),
                    });
                }
                l.cols()
            }
            None => 0,
        };
        match &noise {
            NoiseCoeff::Diagonal(d) => {
                if d.len() != p {
                    return Err(ModelError::NoiseLengthMismatch { expected: p, actual: d.len() });
                }
            }
            NoiseCoeff::Full(m) => {
                if m.rows() != p || m.cols() != p {
                    return Err(ModelError::NoiseShapeMismatch {
                        rows: m.rows(),
                        cols: m.cols(),
                        p,
                    });
                }
            }
        }
        factor_dist.validate()?;
        noise_dist.validate()?;

        let spec = FactorModelSpec { p, k, mu, loading, noise, factor_dist, noise_dist };
        for i in 0..p {
            if spec.gamma_row_sq_norm(i) <= F::zero() {
                return Err(ModelError::ZeroCoefficientRow { row: i });
            }
        }
        Ok(spec)
    }

    fn gamma_row_sq_norm(&self, i: usize) -> F {
        let from_loading = match &self.loading {
            Some(l) => l.row(i).iter().map(|&x| x * x).sum(),
            None => F::zero(),
        };
        from_loading + self.noise.row_sq_norm(i)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mu(&self) -> &[F] {
        &self.mu
    }

    pub fn loading(&self) -> Option<&DenseMatrix<F>> {
        self.loading.as_ref()
    }

    pub fn noise(&self) -> &NoiseCoeff<F> {
        &self.noise
    }

    pub fn factor_dist(&self) -> DistributionTag {
        self.factor_dist
    }

    pub fn noise_dist(&self) -> DistributionTag {
        self.noise_dist
    }

    /// Population covariance `Sigma = L L^T + Lambda Lambda^T`.
    pub fn population_cov(&self) -> DenseMatrix<F> {
        let mut sigma = match &self.noise {
            NoiseCoeff::Diagonal(d) => {
                DenseMatrix::from_fn(self.p, self.p, |i, j| {
                    if i == j {
                        d[i] * d[i]
                    } else {
                        F::zero()
                    }
                })
                .expect("p > 0 and diagonal entries finite after validation")
            }
            NoiseCoeff::Full(m) => m.gram_scaled(F::one()),
        };
        if let Some(l) = &self.loading {
            sigma = sigma.add(&l.gram_scaled(F::one())).expect("shapes agree by construction");
        }
        sigma
    }

    /// Population correlation `R = Delta^{-1/2} Sigma Delta^{-1/2}`.
    ///
    /// The diagonal of `Sigma` is strictly positive because no row of
    /// `[L Lambda]` is zero, so the rescaling never fails.
    pub fn population_corr(&self) -> DenseMatrix<F> {
        crate::sample_stats::corr_from_cov(&self.population_cov())
            .expect("population variances are positive under the row condition")
    }

    /// Population variances `diag(Sigma)` without forming the full matrix.
    pub fn population_variances(&self) -> Vec<F> {
        (0..self.p).map(|i| self.gamma_row_sq_norm(i)).collect()
    }

    pub fn diagnostics(&self) -> ModelDiagnostics<F> {
        let (row_norm_min, row_norm_max, eigs) = match &self.loading {
            Some(l) => {
                let mut lo = F::infinity();
                let mut hi = F::zero();
                for i in 0..self.p {
                    let n2: F = l.row(i).iter().map(|&x| x * x).sum();
                    let n = n2.sqrt();
                    lo = lo.min(n);
                    hi = hi.max(n);
                }
                (lo, hi, gram_transpose_eigs(l))
            }
            None => (F::zero(), F::zero(), Vec::new()),
        };
        let drop_tol = eigs.first().map_or(F::zero(), |&top| top * fl(1e-12));
        let nonzero: Vec<F> = eigs.into_iter().take_while(|&x| x > drop_tol).collect();
        let l1 = match &self.loading {
            Some(l) => l.row(0).iter().map(|&x| x * x).sum(),
            None => F::zero(),
        };
        let lam1 = self.noise.row_sq_norm(0);
        ModelDiagnostics {
            rho: l1 / (l1 + lam1),
            rank_l: nonzero.len(),
            nonzero_eigs_ltl: nonzero,
            row_norm_min,
            row_norm_max,
        }
    }
}

/// Eigenvalues of `L^T L` in descending order (K of them, zeros included).
///
/// Orders 0 and 1 are handled directly since the symmetric solver requires
/// order >= 2.
fn gram_transpose_eigs<F: Scalar>(l: &DenseMatrix<F>) -> Vec<F> {
    let k = l.cols();
    match k {
        0 => Vec::new(),
        1 => {
            let n2 = l.entries().iter().map(|&x| x * x).sum();
            vec![n2]
        }
        _ => {
            let lt = l.transpose();
            let gram = lt.gram_scaled(F::one());
            crate::linalg::sym_eigvals(&gram)
                .expect("Gram matrix is symmetric by construction")
                .values()
                .to_vec()
        }
    }
}

/// Equicorrelated normal pilot model: one constant-column factor of weight
/// `l` and isotropic noise `sigma I`, both Gaussian. Every coordinate pair
/// has correlation `l^2 / (l^2 + sigma^2)`.
pub fn build_enp<F: Scalar>(p: usize, l: F, sigma: F) -> Result<FactorModelSpec<F>, ModelError> {
    if p < 2 {
        return Err(ModelError::DimensionTooSmall { p, min: 2 });
    }
    require_positive("l", l)?;
    require_positive("sigma", sigma)?;
    let loading = DenseMatrix::from_fn(p, 1, |_, _| l)?;
    FactorModelSpec::new(
        p,
        vec![F::zero(); p],
        Some(loading),
        NoiseCoeff::Diagonal(vec![sigma; p]),
        DistributionTag::StandardNormal,
        DistributionTag::StandardNormal,
    )
}

/// Constant-length factor model: K factors of which the first `r` are
/// active, row i loading weight `l` onto factor `(i mod r) + 1`, noise
/// `sigma I`. All rows of `L` have norm exactly `l`; `L^T L` is diagonal
/// with r entries that count row assignments and K - r zeros.
pub fn build_clfm<F: Scalar>(
    p: usize,
    k: usize,
    r: usize,
    l: F,
    sigma: F,
    factor_dist: DistributionTag,
    noise_dist: DistributionTag,
) -> Result<FactorModelSpec<F>, ModelError> {
    if k < 1 {
        return Err(ModelError::FactorCountTooSmall { k, min: 1 });
    }
    if r < 1 || r > k || r > p {
        return Err(ModelError::InvalidRank { r, k, p });
    }
    if p < 2 {
        return Err(ModelError::DimensionTooSmall { p, min: 2 });
    }
    require_positive("l", l)?;
    require_positive("sigma", sigma)?;
    let loading = DenseMatrix::from_fn(p, k, |i, j| if j == i % r { l } else { F::zero() })?;
    FactorModelSpec::new(
        p,
        vec![F::zero(); p],
        Some(loading),
        NoiseCoeff::Diagonal(vec![sigma; p]),
        factor_dist,
        noise_dist,
    )
}

/// Asymptotically constant factor model: row k of `L` is the limit vector
/// `ell` plus a drift term `(drift_scale / k) u_k` where `u_k` cycles
/// through the coordinate axes of R^K, and the noise diagonal is
/// `sigma (1 + drift_scale / k)`. Row norms converge to `||ell||` and the
/// total squared drift is bounded by `drift_scale^2 pi^2 / 6`.
///
/// `ell = 0` with `drift_scale = 0` is allowed: the loading is then the zero
/// matrix and the rows of `[L Lambda]` stay nonzero through the noise.
pub fn build_acfm<F: Scalar>(
    p: usize,
    ell: &[F],
    sigma: F,
    drift_scale: F,
) -> Result<FactorModelSpec<F>, ModelError> {
    let k = ell.len();
    if k < 1 {
        return Err(ModelError::FactorCountTooSmall { k, min: 1 });
    }
    if p < 2 {
        return Err(ModelError::DimensionTooSmall { p, min: 2 });
    }
    require_positive("sigma", sigma)?;
    if drift_scale < F::zero() {
        return Err(ModelError::NegativeParameter {
            name: "drift_scale",
            value: drift_scale.to_f64().unwrap_or(f64::NAN),
        });
    }
    let loading = DenseMatrix::from_fn(p, k, |i, j| {
        let row_index = fl_usize::<F>(i + 1);
        let drift = if j == i % k { drift_scale / row_index } else { F::zero() };
        ell[j] + drift
    })?;
    let noise: Vec<F> = (0..p)
        .map(|i| sigma * (F::one() + drift_scale / fl_usize::<F>(i + 1)))
        .collect();
    FactorModelSpec::new(
        p,
        vec![F::zero(); p],
        Some(loading),
        NoiseCoeff::Diagonal(noise),
        DistributionTag::StandardNormal,
        DistributionTag::StandardNormal,
    )
}

/// Factorless model: observations are `mu + sigma psi` with zero mean.
/// Used for bulk-law and edge-law checks where any factor structure would
/// contaminate the spectrum.
pub fn build_pure_noise<F: Scalar>(
    p: usize,
    sigma: F,
    noise_dist: DistributionTag,
) -> Result<FactorModelSpec<F>, ModelError> {
    if p < 2 {
        return Err(ModelError::DimensionTooSmall { p, min: 2 });
    }
    require_positive("sigma", sigma)?;
    FactorModelSpec::new(
        p,
        vec![F::zero(); p],
        None,
        NoiseCoeff::Diagonal(vec![sigma; p]),
        DistributionTag::StandardNormal,
        noise_dist,
    )
}

/// Random-weight model with unit-norm loading rows: row i splits its unit
/// of squared weight across the K factors by a uniform stick-breaking
/// partition sorted in decreasing order, and each entry takes a random
/// sign: `L_ik = B_ik sqrt(y_ik)`. Noise is the identity.
///
/// The sorted lengths have column means `(1/K) sum_{j=k}^K 1/j`, so the
/// expected squared weight profile is the broken-stick sequence.
pub fn build_brokenstick_loading<F: Scalar>(
    p: usize,
    k: usize,
    seed: u64,
) -> Result<FactorModelSpec<F>, ModelError> {
    if k < 1 {
        return Err(ModelError::FactorCountTooSmall { k, min: 1 });
    }
    if p < 2 {
        return Err(ModelError::DimensionTooSmall { p, min: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(p * k);
    let mut cuts = vec![0.0f64; k + 1];
    for _ in 0..p {
        cuts[0] = 0.0;
        cuts[k] = 1.0;
        for c in cuts[1..k].iter_mut() {
            *c = rng.random::<f64>();
        }
        cuts[1..k].sort_by(|a, b| a.partial_cmp(b).expect("uniform draws are finite"));
        let mut lengths: Vec<f64> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
        lengths.sort_by(|a, b| b.partial_cmp(a).expect("lengths are finite"));
        for y in lengths {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            entries.push(fl::<F>(sign * y.sqrt()));
        }
    }
    let loading = DenseMatrix::new(p, k, entries)?;
    FactorModelSpec::new(
        p,
        vec![F::zero(); p],
        Some(loading),
        NoiseCoeff::Diagonal(vec![F::one(); p]),
        DistributionTag::StandardNormal,
        DistributionTag::StandardNormal,
    )
}

/// Draws a p x n dataset `X = mu 1^T + L F + Lambda Psi` with columns as
/// observations.
///
/// The generator is ChaCha8 seeded with `seed`; the factor block F (K x n,
/// row-major) is drawn before the noise block Psi (p x n, row-major), so
/// identical seeds give bit-identical datasets regardless of platform or
/// thread count.
pub fn sample_dataset<F: Scalar>(
    spec: &FactorModelSpec<F>,
    n: usize,
    seed: u64,
) -> Result<DenseMatrix<F>, ModelError> {
    if n < 2 {
        return Err(ModelError::SampleSizeTooSmall { n });
    }
    let p = spec.p;
    let k = spec.k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let factors = if k > 0 {
        let mut f = vec![F::zero(); k * n];
        spec.factor_dist.fill(&mut rng, &mut f);
        f
    } else {
        Vec::new()
    };

    let mut x = vec![F::zero(); p * n];
    spec.noise_dist.fill(&mut rng, &mut x);

    match &spec.noise {
        NoiseCoeff::Diagonal(d) => {
            for (i, row) in x.chunks_exact_mut(n).enumerate() {
                let s = d[i];
                for v in row.iter_mut() {
                    *v *= s;
                }
            }
        }
        NoiseCoeff::Full(m) => {
            let psi = DenseMatrix::new(p, n, x.clone())?;
            let scaled = m.matmul(&psi)?;
            x.copy_from_slice(scaled.entries());
        }
    }

    if let Some(l) = &spec.loading {
        for (i, row) in x.chunks_exact_mut(n).enumerate() {
            let lrow = l.row(i);
            for (j, &lij) in lrow.iter().enumerate() {
                if lij == F::zero() {
                    continue;
                }
                let frow = &factors[j * n..(j + 1) * n];
                for (v, &f) in row.iter_mut().zip(frow) {
                    *v += lij * f;
                }
            }
        }
    }

    for (i, row) in x.chunks_exact_mut(n).enumerate() {
        let m = spec.mu[i];
        if m != F::zero() {
            for v in row.iter_mut() {
                *v += m;
            }
        }
    }

    Ok(DenseMatrix::new(p, n, x)?)
}

/// Derives the per-replicate seed from a master seed. Uses splitmix64
/// mixing so that consecutive replicate indices give statistically
/// independent ChaCha8 streams.
pub fn derive_replicate_seed(master_seed: u64, replicate: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(replicate.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn require_positive<F: Scalar>(name: &'static str, value: F) -> Result<(), ModelError> {
    if value > F::zero() {
        Ok(())
    } else {
        Err(ModelError::NonPositiveParameter {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}

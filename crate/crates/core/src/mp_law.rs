//! Marchenko-Pastur limit law and distances between it and empirical
//! spectral distributions.
//!
//! The law for dimension-to-sample ratio `c` and noise scale `s` has
//! density `sqrt((a_plus - x)(x - a_minus)) / (2 pi x c s)` on the bulk
//! `[a_minus, a_plus] = [s (1 - sqrt(c))^2, s (1 + sqrt(c))^2]`, plus a
//! point mass of `1 - 1/c` at zero when `c > 1`.
//!
//! The CDF has no elementary closed form the rest of the crate would want
//! to maintain, so [`MpCdf`] integrates the density numerically once into
//! a cumulative table and answers point queries from it. The integration
//! substitutes `x = mid + r sin t`, which turns the square-root edge
//! factor into `r cos t` and removes both endpoint singularities. The
//! substituted integrand is smooth except for a boundary layer of width
//! `sqrt(2 a_minus / r)` at the lower edge when c is close to 1, so the
//! composite 10-point Gauss-Legendre cells are graded cubically toward
//! both ends of the t-interval: with the default 8192 cells the first
//! cell is about 4e-11 wide, which resolves the layer for every c a
//! float can distinguish from 1 and keeps the table error below 1e-10.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{fl, fl_usize, Scalar};

#[derive(Debug, Error)]
pub enum MpError {
    #[error("ratio c must be strictly positive and finite, got {c}")]
    InvalidRatio { c: f64 },
    #[error("scale s must be strictly positive and finite, got {s}")]
    InvalidScale { s: f64 },
    #[error("empirical sample is empty")]
    EmptySample,
    #[error("empirical sample has a non-finite value at index {index}")]
    NonFiniteSample { index: usize },
    #[error("quantile level must lie in (0, 1), got {q}")]
    QuantileOutOfRange { q: f64 },
    #[error("need at least {min} cells or points, got {actual}")]
    ResolutionTooSmall { min: usize, actual: usize },
}

/// Parameters of one Marchenko-Pastur law together with its derived
/// support edges and point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawMpParams<F>",
    bound(deserialize = "F: Scalar + Deserialize<'de>")
)]
pub struct MPParams<F> {
    c: F,
    s: F,
    a_minus: F,
    a_plus: F,
    point_mass: F,
}

#[derive(Deserialize)]
struct RawMpParams<F> {
    c: F,
    s: F,
}

impl<F: Scalar> TryFrom<RawMpParams<F>> for MPParams<F> {
    type Error = MpError;

    fn try_from(raw: RawMpParams<F>) -> Result<Self, Self::Error> {
        MPParams::new(raw.c, raw.s)
    }
}

impl<F: Scalar> MPParams<F> {
    pub fn new(c: F, s: F) -> Result<Self, MpError> {
        if !(c > F::zero()) || !c.is_finite() {
            return Err(MpError::InvalidRatio { c: c.to_f64().unwrap_or(f64::NAN) });
        }
        if !(s > F::zero()) || !s.is_finite() {
            return Err(MpError::InvalidScale { s: s.to_f64().unwrap_or(f64::NAN) });
        }
        let sqrt_c = c.sqrt();
        let lo = F::one() - sqrt_c;
        let hi = F::one() + sqrt_c;
        Ok(MPParams {
            c,
            s,
            a_minus: s * lo * lo,
            a_plus: s * hi * hi,
            point_mass: (F::one() - F::one() / c).max(F::zero()),
        })
    }

    pub fn c(&self) -> F {
        self.c
    }

    pub fn s(&self) -> F {
        self.s
    }

    /// Bulk support edges `(a_minus, a_plus)`.
    pub fn edges(&self) -> (F, F) {
        (self.a_minus, self.a_plus)
    }

    /// Mass at zero, `max(0, 1 - 1/c)`.
    pub fn point_mass(&self) -> F {
        self.point_mass
    }

    /// Bulk density; zero outside the open interval `(a_minus, a_plus)`.
    pub fn density(&self, x: F) -> F {
        if x <= self.a_minus || x >= self.a_plus {
            return F::zero();
        }
        let two_pi = F::PI() + F::PI();
        ((self.a_plus - x) * (x - self.a_minus)).sqrt() / (two_pi * x * self.c * self.s)
    }

    /// Density sampled at `n` evenly spaced points spanning the closed
    /// bulk interval.
    pub fn density_curve(&self, n: usize) -> Result<Vec<(F, F)>, MpError> {
        if n < 2 {
            return Err(MpError::ResolutionTooSmall { min: 2, actual: n });
        }
        let step = (self.a_plus - self.a_minus) / fl_usize::<F>(n - 1);
        Ok((0..n)
            .map(|i| {
                let x = self.a_minus + step * fl_usize::<F>(i);
                (x, self.density(x))
            })
            .collect())
    }

    /// Integrand of the bulk mass after the substitution
    /// `x = mid + r sin t`:
    ///
    /// `density(x) dx = r^2 cos^2 t / (2 pi c s (mid + r sin t)) dt`.
    ///
    /// When the lower edge is exactly zero (`c = 1`) the quotient
    /// simplifies algebraically to `r (1 - sin t) / (2 pi c s)`, which
    /// avoids the removable 0/0 at `t = -pi/2`.
    fn bulk_integrand(&self, t: F) -> F {
        let two = F::one() + F::one();
        let r = (self.a_plus - self.a_minus) / two;
        let mid = (self.a_plus + self.a_minus) / two;
        let two_pi = F::PI() + F::PI();
        let sin_t = t.sin();
        if self.a_minus == F::zero() {
            r * (F::one() - sin_t) / (two_pi * self.c * self.s)
        } else {
            let cos_t = t.cos();
            r * r * cos_t * cos_t / (two_pi * self.c * self.s * (mid + r * sin_t))
        }
    }
}

/// Convenience wrapper returning the MP support edges for `(c, s)`.
pub fn mp_edges<F: Scalar>(c: F, s: F) -> Result<(F, F), MpError> {
    Ok(MPParams::new(c, s)?.edges())
}

/// Convenience wrapper returning the MP bulk density at `x`.
pub fn mp_density<F: Scalar>(c: F, s: F, x: F) -> Result<F, MpError> {
    Ok(MPParams::new(c, s)?.density(x))
}

const GL10_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

const DEFAULT_CDF_CELLS: usize = 8192;

/// Cumulative distribution of one MP law, evaluated from a precomputed
/// integral table.
#[derive(Debug, Clone)]
pub struct MpCdf<F> {
    params: MPParams<F>,
    /// Cell boundaries in the substituted variable `t`, graded toward
    /// both endpoints.
    bounds: Vec<F>,
    /// `cum[i]` is the bulk mass accumulated over the first `i` cells.
    cum: Vec<F>,
}

impl<F: Scalar> MpCdf<F> {
    pub fn new(params: MPParams<F>) -> Self {
        Self::with_resolution(params, DEFAULT_CDF_CELLS)
            .expect("default resolution is valid")
    }

    /// Builds the table with an explicit cell count; mostly useful for
    /// convergence checks in tests.
    pub fn with_resolution(params: MPParams<F>, cells: usize) -> Result<Self, MpError> {
        if cells < 16 {
            return Err(MpError::ResolutionTooSmall { min: 16, actual: cells });
        }
        let half_pi = F::FRAC_PI_2();
        let two_pi = F::PI() + F::PI();
        let bounds: Vec<F> = (0..=cells)
            .map(|i| {
                // cubic grading: u - sin(2 pi u)/(2 pi) has triple zeros at
                // both ends, clustering cells where the integrand kinks
                let u = fl_usize::<F>(i) / fl_usize::<F>(cells);
                let w = u - (two_pi * u).sin() / two_pi;
                -half_pi + F::PI() * w
            })
            .collect();
        let mut cum = Vec::with_capacity(cells + 1);
        let mut acc = F::zero();
        cum.push(acc);
        for w in bounds.windows(2) {
            acc += gl10(|t| params.bulk_integrand(t), w[0], w[1]);
            cum.push(acc);
        }
        Ok(MpCdf { params, bounds, cum })
    }

    pub fn params(&self) -> &MPParams<F> {
        &self.params
    }

    /// `F(x) = point_mass * [x >= 0] + integral of the bulk density up to
    /// x`. Right-continuous like any CDF.
    pub fn eval(&self, x: F) -> F {
        if !x.is_finite() {
            return if x > F::zero() { F::one() } else { F::zero() };
        }
        let atom = if x >= F::zero() { self.params.point_mass } else { F::zero() };
        atom + self.bulk_below(x)
    }

    /// Left limit `F(x-)`, which differs from `eval` only at the atom.
    pub fn eval_left(&self, x: F) -> F {
        let atom = if x > F::zero() { self.params.point_mass } else { F::zero() };
        atom + self.bulk_below(x)
    }

    fn bulk_below(&self, x: F) -> F {
        let (a_minus, a_plus) = self.params.edges();
        if x <= a_minus {
            return F::zero();
        }
        if x >= a_plus {
            return *self.cum.last().expect("table is nonempty");
        }
        let two = F::one() + F::one();
        let r = (a_plus - a_minus) / two;
        let mid = (a_plus + a_minus) / two;
        let t = ((x - mid) / r).max(-F::one()).min(F::one()).asin();
        let cells = self.cum.len() - 1;
        let idx = self
            .bounds
            .partition_point(|&b| b <= t)
            .saturating_sub(1)
            .min(cells - 1);
        self.cum[idx] + gl10(|u| self.params.bulk_integrand(u), self.bounds[idx], t)
    }

    /// Smallest `x` with `F(x) >= q`, located by bisection on the bulk.
    pub fn quantile(&self, q: F) -> Result<F, MpError> {
        if !(q > F::zero()) || !(q < F::one()) {
            return Err(MpError::QuantileOutOfRange { q: q.to_f64().unwrap_or(f64::NAN) });
        }
        let pm = self.params.point_mass;
        if pm > F::zero() && q <= pm {
            return Ok(F::zero());
        }
        let (mut lo, mut hi) = self.params.edges();
        if self.eval(hi) <= q {
            return Ok(hi);
        }
        for _ in 0..90 {
            let two = F::one() + F::one();
            let midpoint = (lo + hi) / two;
            if midpoint <= lo || midpoint >= hi {
                break;
            }
            if self.eval(midpoint) < q {
                lo = midpoint;
            } else {
                hi = midpoint;
            }
        }
        Ok(hi)
    }

    /// CDF sampled at `n` evenly spaced points spanning the closed bulk
    /// interval.
    pub fn curve(&self, n: usize) -> Result<Vec<(F, F)>, MpError> {
        if n < 2 {
            return Err(MpError::ResolutionTooSmall { min: 2, actual: n });
        }
        let (a_minus, a_plus) = self.params.edges();
        let step = (a_plus - a_minus) / fl_usize::<F>(n - 1);
        Ok((0..n)
            .map(|i| {
                let x = a_minus + step * fl_usize::<F>(i);
                (x, self.eval(x))
            })
            .collect())
    }
}

fn gl10<F: Scalar>(f: impl Fn(F) -> F, a: F, b: F) -> F {
    let two = F::one() + F::one();
    let mid = (a + b) / two;
    let half = (b - a) / two;
    let mut acc = F::zero();
    for (&node, &weight) in GL10_NODES.iter().zip(GL10_WEIGHTS.iter()) {
        let (n, w) = (fl::<F>(node), fl::<F>(weight));
        acc += w * (f(mid + half * n) + f(mid - half * n));
    }
    acc * half
}

/// Empirical spectral distribution: equal mass `1/p` at each value.
#[derive(Debug, Clone)]
pub struct Esd<F> {
    sorted: Vec<F>,
}

impl<F: Scalar> Esd<F> {
    pub fn from_values(values: &[F]) -> Result<Self, MpError> {
        if values.is_empty() {
            return Err(MpError::EmptySample);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(MpError::NonFiniteSample { index });
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
        Ok(Esd { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of values `<= x`.
    pub fn cdf(&self, x: F) -> F {
        let count = self.sorted.partition_point(|&v| v <= x);
        fl_usize::<F>(count) / fl_usize::<F>(self.sorted.len())
    }

    /// Fraction of values strictly `< x`, the left limit of the CDF.
    pub fn cdf_left(&self, x: F) -> F {
        let count = self.sorted.partition_point(|&v| v < x);
        fl_usize::<F>(count) / fl_usize::<F>(self.sorted.len())
    }

    pub fn min(&self) -> F {
        self.sorted[0]
    }

    pub fn max(&self) -> F {
        *self.sorted.last().expect("nonempty by construction")
    }
}

const KS_GRID_POINTS: usize = 10_000;

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `values` and the MP law behind `cdf`.
///
/// The supremum is scanned at both one-sided limits of every empirical
/// jump and of the atom at zero, where it must be attained, plus a
/// 10^4-point grid across the union of both supports as a guard against
/// bulk regions carrying no sample points.
pub fn ks_distance<F: Scalar>(values: &[F], cdf: &MpCdf<F>) -> Result<F, MpError> {
    let esd = Esd::from_values(values)?;
    let (a_minus, a_plus) = cdf.params().edges();
    let mut worst = F::zero();

    let consider = |x: F, worst: &mut F| {
        let right = (esd.cdf(x) - cdf.eval(x)).abs();
        let left = (esd.cdf_left(x) - cdf.eval_left(x)).abs();
        *worst = (*worst).max(right).max(left);
    };

    for &x in &esd.sorted {
        consider(x, &mut worst);
    }
    if cdf.params().point_mass() > F::zero() {
        consider(F::zero(), &mut worst);
    }
    consider(a_minus, &mut worst);
    consider(a_plus, &mut worst);

    let lo = esd.min().min(a_minus);
    let hi = esd.max().max(a_plus);
    let step = (hi - lo) / fl_usize::<F>(KS_GRID_POINTS - 1);
    for i in 0..KS_GRID_POINTS {
        let x = lo + step * fl_usize::<F>(i);
        worst = worst.max((esd.cdf(x) - cdf.eval(x)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Recursive adaptive Simpson; deliberately a different quadrature
    /// from the Gauss-Legendre table used in production.
    fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        let whole = simpson(f, a, b);
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            adaptive_simpson(f, a, m, tol / 2.0, depth - 1)
                + adaptive_simpson(f, m, b, tol / 2.0, depth - 1)
        }
    }

    fn bulk_mass_oracle(params: &MPParams<f64>, upto: f64) -> f64 {
        let (a_minus, a_plus) = params.edges();
        let hi = upto.min(a_plus);
        if hi <= a_minus {
            return 0.0;
        }
        // shrink away from the edges; the omitted slivers carry
        // O(delta^{3/2}) and O(sqrt(delta)) mass, both far below 1e-7
        let delta = 1e-15 * (a_plus - a_minus);
        let lo = if a_minus == 0.0 { 1e-16 * a_plus } else { a_minus + delta };
        let hi = if hi == a_plus { hi - delta } else { hi };
        adaptive_simpson(&|x| params.density(x), lo, hi, 1e-9, 60)
    }

    #[test]
    fn edge_examples() {
        let (lo, hi) = mp_edges(0.25f64, 1.0).unwrap();
        assert_abs_diff_eq!(lo, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 2.25, epsilon = 1e-12);

        let (lo, hi) = mp_edges(1.0f64, 2.0).unwrap();
        assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 8.0, epsilon = 1e-12);

        let params = MPParams::new(4.0f64, 1.0).unwrap();
        let (lo, hi) = params.edges();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(params.point_mass(), 0.75, epsilon = 1e-12);

        assert_eq!(MPParams::new(0.25f64, 1.0).unwrap().point_mass(), 0.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(MPParams::new(0.0f64, 1.0).is_err());
        assert!(MPParams::new(-1.0f64, 1.0).is_err());
        assert!(MPParams::new(1.0f64, 0.0).is_err());
        assert!(MPParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn density_value_at_square_case() {
        let d = mp_density(1.0f64, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(d, 1.0 / (2.0 * std::f64::consts::PI), epsilon = 1e-14);
    }

    #[test]
    fn density_vanishes_off_support() {
        let params = MPParams::new(0.25f64, 1.0).unwrap();
        assert_eq!(params.density(0.1), 0.0);
        assert_eq!(params.density(0.25), 0.0);
        assert_eq!(params.density(2.25), 0.0);
        assert_eq!(params.density(3.0), 0.0);
        assert!(params.density(1.0) > 0.0);
    }

    #[test]
    fn bulk_mass_is_one_minus_point_mass() {
        for (c, s) in [(0.25, 1.0), (0.5, 2.0), (1.0, 1.0), (2.0, 1.0), (4.0, 0.5)] {
            let params = MPParams::new(c, s).unwrap();
            let mass = bulk_mass_oracle(&params, f64::INFINITY);
            assert!(
                (mass - (1.0 - params.point_mass())).abs() < 1e-6,
                "c={c} s={s}: bulk mass {mass}"
            );
        }
    }

    #[test]
    fn cdf_table_matches_independent_quadrature() {
        for (c, s) in [(0.25, 1.0), (1.0, 1.0), (4.0, 1.0)] {
            let params = MPParams::new(c, s).unwrap();
            let cdf = MpCdf::new(params);
            let (a_minus, a_plus) = params.edges();
            for frac in [0.05, 0.2, 0.5, 0.8, 0.95] {
                let x = a_minus + frac * (a_plus - a_minus);
                let expected = params.point_mass() + bulk_mass_oracle(&params, x);
                assert!(
                    (cdf.eval(x) - expected).abs() < 1e-6,
                    "c={c} x={x}: table {} oracle {expected}",
                    cdf.eval(x)
                );
            }
        }
    }

    #[test]
    fn cdf_table_converged_at_default_resolution() {
        for (c, s) in [(0.25f64, 1.0), (1.0, 1.0), (1.0001, 1.0), (0.999999, 1.0), (4.0, 2.0)] {
            let params = MPParams::new(c, s).unwrap();
            let coarse = MpCdf::new(params);
            let fine = MpCdf::with_resolution(params, 32_768).unwrap();
            let (a_minus, a_plus) = params.edges();
            for i in 0..400 {
                let x = a_minus + (a_plus - a_minus) * (i as f64) / 399.0;
                assert!(
                    (coarse.eval(x) - fine.eval(x)).abs() < 1e-9,
                    "c={c} x={x}"
                );
            }
        }
    }

    #[test]
    fn cdf_boundary_behavior() {
        let params = MPParams::new(0.25f64, 1.0).unwrap();
        let cdf = MpCdf::new(params);
        assert_eq!(cdf.eval(0.25), 0.0);
        assert_eq!(cdf.eval(-1.0), 0.0);
        assert_abs_diff_eq!(cdf.eval(2.25), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(cdf.eval(10.0), 1.0, epsilon = 1e-8);

        let heavy = MpCdf::new(MPParams::new(4.0f64, 1.0).unwrap());
        assert_eq!(heavy.eval(-0.5), 0.0);
        assert_abs_diff_eq!(heavy.eval(0.0), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(heavy.eval(0.5), 0.75, epsilon = 1e-12);
        assert_eq!(heavy.eval_left(0.0), 0.0);
        assert_abs_diff_eq!(heavy.eval(9.0), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn cdf_is_monotone() {
        let cdf = MpCdf::new(MPParams::new(0.5f64, 1.0).unwrap());
        let mut prev = -1.0;
        for i in 0..2000 {
            let x = -0.5 + 3.5 * (i as f64) / 1999.0;
            let v = cdf.eval(x);
            assert!(v >= prev - 1e-14, "x={x}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let cdf = MpCdf::new(MPParams::new(0.25f64, 1.0).unwrap());
        for q in [0.01, 0.1, 0.5, 0.9, 0.99] {
            let x = cdf.quantile(q).unwrap();
            assert_abs_diff_eq!(cdf.eval(x), q, epsilon = 1e-9);
        }
        assert!(cdf.quantile(0.0).is_err());
        assert!(cdf.quantile(1.0).is_err());

        let heavy = MpCdf::new(MPParams::new(4.0f64, 1.0).unwrap());
        assert_eq!(heavy.quantile(0.5).unwrap(), 0.0);
        assert!(heavy.quantile(0.9).unwrap() > 1.0);
    }

    #[test]
    fn esd_step_examples() {
        let esd = Esd::from_values(&[1.0f64, 1.0, 1.0]).unwrap();
        assert_eq!(esd.cdf(1.0), 1.0);
        assert_eq!(esd.cdf(0.999), 0.0);
        assert_eq!(esd.cdf_left(1.0), 0.0);

        let esd = Esd::from_values(&[2.0f64, 0.0]).unwrap();
        assert_eq!(esd.cdf(1.0), 0.5);
        assert_eq!(esd.cdf(2.0), 1.0);
        assert_eq!(esd.cdf(-0.1), 0.0);

        assert!(Esd::<f64>::from_values(&[]).is_err());
        assert!(Esd::from_values(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn quantile_sample_has_vanishing_ks_distance() {
        let cdf = MpCdf::new(MPParams::new(0.25f64, 1.0).unwrap());
        let p = 10_000;
        let sample: Vec<f64> = (0..p)
            .map(|j| cdf.quantile((j as f64 + 0.5) / p as f64).unwrap())
            .collect();
        let d = ks_distance(&sample, &cdf).unwrap();
        assert!(d <= 2e-4 + 1.0 / p as f64, "ks = {d}");
    }

    #[test]
    fn identity_spectrum_is_far_from_quarter_ratio_law() {
        let cdf = MpCdf::new(MPParams::new(0.25f64, 1.0).unwrap());
        let sample = vec![1.0f64; 200];
        let d = ks_distance(&sample, &cdf).unwrap();
        assert!(d > 0.4, "ks = {d}");
    }

    #[test]
    fn curves_are_well_formed() {
        let params = MPParams::new(0.5f64, 1.0).unwrap();
        let density = params.density_curve(101).unwrap();
        assert_eq!(density.len(), 101);
        assert_eq!(density[0].1, 0.0);
        assert_eq!(density[100].1, 0.0);
        assert!(density.windows(2).all(|w| w[1].0 > w[0].0));
        assert!(density.iter().all(|&(_, y)| y >= 0.0));

        let cdf = MpCdf::new(params).curve(64).unwrap();
        assert_eq!(cdf.len(), 64);
        assert!(cdf.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-14));
        assert!(params.density_curve(1).is_err());
    }

    #[test]
    fn works_in_f32() {
        let params = MPParams::new(0.25f32, 1.0).unwrap();
        let cdf = MpCdf::new(params);
        assert!((cdf.eval(2.25) - 1.0).abs() < 1e-4);
        assert!(cdf.eval(1.0) > 0.3 && cdf.eval(1.0) < 0.9);
    }

    #[test]
    fn params_round_trip_and_validate_through_serde() {
        let params = MPParams::new(0.25f64, 2.0).unwrap();
        let json = serde_json::to_string(&params).unwrap();
        let back: MPParams<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(params, back);
        assert!(serde_json::from_str::<MPParams<f64>>(r#"{"c":-1.0,"s":1.0}"#).is_err());
    }
}

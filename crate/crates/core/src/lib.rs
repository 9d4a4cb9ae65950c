//! Simulation and spectral analysis of high-dimensional factor models.
//!
//! The crate covers the full desk-scale workflow for studying sample
//! correlation spectra under `X = M + L F + Lambda Psi` data-generating
//! processes:
//!
//! * [`linalg`]: dense symmetric eigendecomposition, singular values,
//!   and executable singular-value perturbation bounds;
//! * [`factor_models`]: model construction (equicorrelated one-factor,
//!   constant-loading-norm, asymptotically-constant-loading, random
//!   broken-stick loadings) and deterministic seeded sampling;
//! * [`sample_stats`]: theoretically- and data-centered sample
//!   covariance and correlation matrices plus the diagonal-ratio
//!   concentration diagnostic;
//! * [`mp_law`]: Marchenko-Pastur densities, CDFs, empirical spectral
//!   distributions, and Kolmogorov-Smirnov distances;
//! * [`estimators`]: broken-stick, adjusted-eigenvalue thresholding,
//!   and Bai-Ng component-count estimators with a tabular report type;
//! * [`hp`]: Fisher z-transform, Hodrick-Prescott trend/cycle
//!   decomposition, and rolling mean-correlation series;
//! * [`verify`]: deterministic Monte Carlo jobs that compare sample
//!   spectra against their asymptotic limits.
//!
//! All numerics are generic over the [`scalar::Scalar`] floating-point
//! abstraction; the aliases below fix the common `f64` instantiations.

// validation guards are written as negated comparisons (`!(v > 0)`) on
// purpose: the negation also rejects NaN, which `v <= 0` would let through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod estimators;
pub mod factor_models;
pub mod hp;
pub mod linalg;
pub mod mp_law;
pub mod sample_stats;
pub mod scalar;
pub mod verify;

pub use scalar::Scalar;

/// `f64` dense matrix.
pub type Matrix = linalg::DenseMatrix<f64>;
/// `f32` dense matrix.
pub type Matrix32 = linalg::DenseMatrix<f32>;
/// `f64` spectrum.
pub type SpectrumF64 = linalg::Spectrum<f64>;
/// `f64` factor-model description.
pub type ModelSpec = factor_models::FactorModelSpec<f64>;
/// `f64` Marchenko-Pastur parameters.
pub type MpParams = mp_law::MPParams<f64>;

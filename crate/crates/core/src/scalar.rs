//! Scalar abstraction for all numeric routines in this crate.
//!
//! Every algorithm is generic over [`Scalar`] so the same code runs in
//! `f32` or `f64`. Concrete aliases for the common `f64` instantiations
//! live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::{Product, Sum};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable by every routine in this crate.
///
/// A blanket implementation covers any type with the listed bounds, in
/// particular `f32` and `f64`. `Send + Sync` is required because matrix
/// products and Monte Carlo replicates are parallelized with rayon.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Product
    + Send
    + Sync
    + Debug
    + Display
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Product
        + Send
        + Sync
        + Debug
        + Display
        + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
///
/// Panics only if the target type cannot represent any finite `f64`,
/// which cannot happen for the standard float types.
#[inline]
pub(crate) fn fl<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("finite f64 constant representable in scalar type")
}

/// Converts a count into the working scalar type.
#[inline]
pub(crate) fn fl_usize<F: Scalar>(n: usize) -> F {
    F::from_usize(n).expect("usize representable in scalar type")
}

/// Tolerance with an `f64`-scale default, floored at a small multiple of
/// the working type's epsilon so `f32` instantiations stay usable.
#[inline]
pub(crate) fn eps_floored_tol<F: Scalar>(f64_tol: f64) -> F {
    let floor = F::epsilon() * fl::<F>(16.0);
    fl::<F>(f64_tol).max(floor)
}

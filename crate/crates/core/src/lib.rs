//! Numerical engine for fiducial inference built on the observation that a
//! parametric family of continuous distributions is one two-variable surface
//! F(x, theta): sections at fixed parameter are the member distributions,
//! sections at fixed observation are fiducial measures, and both read the
//! same values.
//!
//! The crate computes fiducial measures and distributions, decides whether a
//! fiducial distribution exists (non-intersection plus completeness),
//! extracts confidence-limit sets, decomposes non-monotone measures (Jordan,
//! even/odd), analyzes |x| composites and their reduced forms, combines
//! multiple observations into one fiducial density, and measures coverage of
//! competing one-sided limits.
//!
//! All numerics are generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the `*64` aliases at the crate root are the concrete
//! handles most callers want.

// negated comparisons are deliberate: `!(a > 0)` rejects NaN parameters
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision, clippy::needless_range_loop)]

pub mod classify;
pub mod coverage;
pub mod error;
pub mod export;
pub mod families;
pub mod fiducial;
pub mod multiobs;
pub mod numeric;
pub mod real;
pub mod spec;
pub mod special;
pub mod surface;

pub use error::Error;
pub use real::Real;

/// Type-erased family over `f64`.
pub type Family64 = families::DynFamily<f64>;
/// Type-erased family over `f32`.
pub type Family32 = families::DynFamily<f32>;
/// Surface over a boxed `f64` family, the CLI's working type.
pub type Surface64 = surface::FiducialSurface<f64, Family64>;
pub type Tolerances64 = classify::Tolerances<f64>;
pub type Verdict64 = classify::ExistenceVerdict<f64>;
pub type Error64 = error::Error<f64>;

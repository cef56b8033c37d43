//! Cap sets in `F_3^n` and their polynomial-method bounds.
//!
//! Exact q-nomial coefficients, the bound family built from them, a
//! verifier for the slice-rank core of the argument, an exhaustive cap
//! search in small dimension, and high-precision growth constants.
//!
//! Numerical routines are generic over [`Real`]; the aliases below fix the
//! common instantiations.

pub mod asymptotics;
pub mod bigfixed;
pub mod bounds;
pub mod capsearch;
pub mod clp;
pub mod error;
pub mod golden;
pub mod qnomial;
pub mod report;
pub mod scalar;
pub mod suite;

pub use bigfixed::BigFixed;
pub use bounds::{
    bound_for_d, optimal_bound, series_bound, sharp_bound, theorem_bound, BoundMethod, BoundReport,
    Identity,
};
pub use capsearch::{is_progression_free, max_capset, CapSet, SearchResult, MAX_DIM};
pub use clp::{clp_split, verify_support_bound, ClpSplit, FieldPoly, PointSet, VerifierReport};
pub use error::{Error, Result};
pub use qnomial::{mspace_size, qnomial, qnomial_row, series_coeff_bound, QNomialRow};
pub use scalar::Real;

/// Saddle-point result at arbitrary precision.
pub type BigSaddle = asymptotics::SaddleResult<BigFixed>;
/// Saddle-point result in double precision.
pub type SaddleF64 = asymptotics::SaddleResult<f64>;
/// Saddle-point result in single precision.
pub type SaddleF32 = asymptotics::SaddleResult<f32>;
/// Ratio-extrapolated growth constant at arbitrary precision.
pub type BigRatioEstimate = asymptotics::RatioEstimate<BigFixed>;
/// Ratio-extrapolated growth constant in double precision.
pub type RatioEstimateF64 = asymptotics::RatioEstimate<f64>;

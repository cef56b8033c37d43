//! Growth constants, the central recurrence and the sharp-bound constant.

pub mod constant;
pub mod ratio;
pub mod recurrence;
pub mod saddle;

/// Extra decimal places carried internally beyond the requested precision.
pub const GUARD_DIGITS: u32 = 10;

/// Default number of decimal places for high-precision output.
pub const DEFAULT_DIGITS: u32 = 40;

pub use constant::{
    empirical_leading_constant, first_correction_estimate, leading_constant, leading_constant_with,
    normalized_sharp_bound, EmpiricalConstant, FirstCorrection,
};
pub use ratio::{growth_constant_ratio, richardson_limit, richardson_step, RatioEstimate};
pub use recurrence::{
    alpha, central_sequence, characteristic_root, check_sequence, larger_quadratic_root,
    limit_recurrence, operator, verify_recurrence, IntPoly, RecurrenceCheck,
};
pub use saddle::{growth_constant, saddle_point, SaddleResult};

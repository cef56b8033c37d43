//! Scalar abstraction shared by the numeric routines.
//!
//! The saddle-point solver, Richardson extrapolation and the closed-form
//! leading constant are written once against [`Real`] and instantiated with
//! `f32`, `f64` or [`BigFixed`]. Hardware floats ignore the requested digit
//! count; `BigFixed` uses it as its working scale.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num};

use crate::bigfixed::BigFixed;

pub trait Real:
    Num + Clone + PartialOrd + Neg<Output = Self> + FromPrimitive + fmt::Debug + fmt::Display
{
    /// Lift a value to a working precision of `digits` decimal places.
    fn at_precision(self, digits: u32) -> Self;

    fn sqrt(&self) -> Self;

    fn cbrt(&self) -> Self;

    fn abs(&self) -> Self;

    fn pi(digits: u32) -> Self;

    /// `10^-digits`, but never below what the type can resolve near 1.
    fn tolerance(digits: u32) -> Self;

    fn from_ratio(num: &BigInt, den: &BigInt, digits: u32) -> Self;

    fn to_f64(&self) -> f64;

    /// Small integer constant.
    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("small integer fits every Real")
    }
}

macro_rules! impl_real_float {
    ($t:ty) => {
        impl Real for $t {
            fn at_precision(self, _digits: u32) -> Self {
                self
            }

            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }

            fn cbrt(&self) -> Self {
                <$t>::cbrt(*self)
            }

            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }

            fn pi(_digits: u32) -> Self {
                std::f64::consts::PI as $t
            }

            fn tolerance(digits: u32) -> Self {
                let requested = 10f64.powi(-(digits.min(300) as i32)) as $t;
                requested.max(4.0 * <$t>::EPSILON)
            }

            fn from_ratio(num: &BigInt, den: &BigInt, _digits: u32) -> Self {
                BigFixed::ratio_to_f64(num, den) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_real_float!(f32);
impl_real_float!(f64);

impl Real for BigFixed {
    fn at_precision(self, digits: u32) -> Self {
        if self.scale() >= digits {
            self
        } else {
            self.with_scale(digits)
        }
    }

    fn sqrt(&self) -> Self {
        BigFixed::sqrt(self)
    }

    fn cbrt(&self) -> Self {
        BigFixed::cbrt(self)
    }

    fn abs(&self) -> Self {
        BigFixed::abs(self)
    }

    fn pi(digits: u32) -> Self {
        BigFixed::pi(digits)
    }

    fn tolerance(digits: u32) -> Self {
        BigFixed::ulp(digits)
    }

    fn from_ratio(num: &BigInt, den: &BigInt, digits: u32) -> Self {
        BigFixed::from_ratio(num, den, digits)
    }

    fn to_f64(&self) -> f64 {
        BigFixed::to_f64(self)
    }
}

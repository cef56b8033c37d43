//! Exact check of the second-order recurrence for `d(n) = C(3n, 2n)_2`, and
//! the characteristic root of its constant-coefficient limit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::GUARD_DIGITS;
use crate::bigfixed::BigFixed;
use crate::error::{domain, Result};
use crate::golden::{RECURRENCE_P0, RECURRENCE_P1, RECURRENCE_P2};
use crate::qnomial::qnomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceCheck {
    pub n_max: u32,
    pub all_zero: bool,
    pub first_failure: Option<u32>,
}

/// Integer polynomial, low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn from_factors(factors: &[&[i64]]) -> Self {
        factors
            .iter()
            .fold(IntPoly(vec![BigInt::from(1)]), |acc, f| {
                let f: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
                let mut out = vec![BigInt::zero(); acc.0.len() + f.len() - 1];
                for (i, a) in acc.0.iter().enumerate() {
                    for (j, b) in f.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                IntPoly(out)
            })
    }

    pub fn eval(&self, n: i64) -> BigInt {
        let n = BigInt::from(n);
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &n + c)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.0.last().expect("nonempty polynomial")
    }
}

/// The three coefficient polynomials of the printed operator.
pub fn operator() -> [IntPoly; 3] {
    [
        IntPoly::from_factors(RECURRENCE_P0),
        IntPoly::from_factors(RECURRENCE_P1),
        IntPoly::from_factors(RECURRENCE_P2),
    ]
}

/// Check the operator against an arbitrary sequence `seq[0..]`.
pub fn check_sequence(seq: &[BigInt]) -> RecurrenceCheck {
    let ops = operator();
    let n_max = seq.len().saturating_sub(1) as u32;
    let first_failure = seq.windows(3).enumerate().find_map(|(n, w)| {
        let n = n as i64;
        let value = ops[0].eval(n) * &w[0] + ops[1].eval(n) * &w[1] + ops[2].eval(n) * &w[2];
        (!value.is_zero()).then_some(n as u32)
    });
    RecurrenceCheck {
        n_max,
        all_zero: first_failure.is_none(),
        first_failure,
    }
}

/// `d(n) = C(3n, 2n)_2` for `n = 0..=n_max`.
pub fn central_sequence(n_max: u32) -> Vec<BigInt> {
    (0..=n_max)
        .map(|n| BigInt::from(qnomial(3 * n, 2 * n as i64, 3).expect("q = 3 is valid")))
        .collect()
}

/// Evaluate the operator on `d(n)` for `n = 0..=n_max-2` in exact integers.
pub fn verify_recurrence(n_max: u32) -> Result<RecurrenceCheck> {
    if n_max < 2 {
        return domain(format!("n_max must be at least 2, got {n_max}"));
    }
    Ok(check_sequence(&central_sequence(n_max)))
}

/// Leading coefficients of the operator, divided by their common factor.
///
/// This is the constant-coefficient recurrence governing the growth rate.
pub fn limit_recurrence() -> [BigInt; 3] {
    let ops = operator();
    let degree = ops.iter().map(IntPoly::degree).max().unwrap_or(0);
    let lead: Vec<BigInt> = ops
        .iter()
        .map(|p| {
            if p.degree() == degree {
                p.leading().clone()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    let g = lead.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let sign = if lead[2].is_negative() { -1 } else { 1 };
    [
        &lead[0] / &g * sign,
        &lead[1] / &g * sign,
        &lead[2] / &g * sign,
    ]
}

/// `(5589 + 891 sqrt(33)) / 512`, rounded to `digits` places.
pub fn characteristic_root(digits: u32) -> BigFixed {
    characteristic_root_exact(digits + GUARD_DIGITS).rounded(digits)
}

pub(crate) fn characteristic_root_exact(scale: u32) -> BigFixed {
    let sqrt33 = BigFixed::from_integer(33).with_scale(scale).sqrt();
    (BigFixed::from_integer(5589) + BigFixed::from_integer(891) * sqrt33)
        / BigFixed::from_integer(512)
}

/// Larger root of `c2 N^2 + c1 N + c0` by the quadratic formula.
pub fn larger_quadratic_root(coeffs: &[BigInt; 3], scale: u32) -> BigFixed {
    let [c0, c1, c2] = coeffs;
    let disc = c1 * c1 - BigInt::from(4) * c2 * c0;
    let root = BigFixed::from_integer(disc).with_scale(scale).sqrt();
    (BigFixed::from_integer(-c1) + root) / BigFixed::from_integer(c2 * 2)
}

/// Cube root of the characteristic root, rounded to `digits` places.
pub fn alpha(digits: u32) -> BigFixed {
    alpha_exact(digits + GUARD_DIGITS).rounded(digits)
}

pub(crate) fn alpha_exact(scale: u32) -> BigFixed {
    characteristic_root_exact(scale + 2)
        .cbrt()
        .with_scale(scale)
}

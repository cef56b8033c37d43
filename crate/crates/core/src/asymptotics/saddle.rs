//! Saddle point of `f(x) x^(-(q-1)/3)` with `f(x) = 1 + x + ... + x^(q-1)`.
//!
//! The exponential growth rate of `[x^((q-1)n/3)] f(x)^n` is the minimum of
//! `f(x) x^(-(q-1)/3)` over `x > 0`. Stationarity reduces to the polynomial
//! `g(x) = sum_j (3j - (q-1)) x^j`, whose coefficients change sign once, so it
//! has exactly one positive root, and `g(0) < 0 < g(1)` places it in `(0, 1)`.

use serde::Serialize;

use super::GUARD_DIGITS;
use crate::bigfixed::BigFixed;
use crate::error::{domain, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaddleResult<T> {
    pub q: u32,
    pub digits: u32,
    pub x0: T,
    pub constant: T,
    /// `|g(x0)|` at working precision.
    pub residual: T,
    pub newton_steps: u32,
}

/// Horner evaluation of `sum_j coeffs[j] x^j`.
pub(crate) fn horner<T: Real>(coeffs: &[i64], x: &T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * x.clone() + T::int(c))
}

pub(crate) fn powi<T: Real>(x: &T, exp: u32) -> T {
    (0..exp).fold(T::one(), |acc, _| acc * x.clone())
}

fn stationarity_coeffs(q: u32) -> Vec<i64> {
    (0..q as i64).map(|j| 3 * j - (q as i64 - 1)).collect()
}

fn derivative(coeffs: &[i64]) -> Vec<i64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, &c)| j as i64 * c)
        .collect()
}

/// Locate the saddle point by bisection, polish by Newton, and evaluate the
/// growth constant `f(x0) / cbrt(x0^(q-1))`.
pub fn saddle_point<T: Real>(q: u32, digits: u32) -> Result<SaddleResult<T>> {
    if q < 2 {
        return domain(format!("q must be at least 2, got {q}"));
    }
    let work = digits + GUARD_DIGITS;
    let g = stationarity_coeffs(q);
    let dg = derivative(&g);
    let lift = |v: T| v.at_precision(work);

    let mut lo = lift(T::zero());
    let mut hi = lift(T::one());
    assert!(
        horner(&g, &lo) < T::zero() && horner(&g, &hi) > T::zero(),
        "stationarity polynomial must change sign on (0, 1)"
    );
    let two = T::int(2);
    let mut x = (lo.clone() + hi.clone()) / two.clone();
    for _ in 0..48 {
        let gx = horner(&g, &x);
        if gx.is_zero() {
            break;
        }
        if gx < T::zero() {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        x = (lo.clone() + hi.clone()) / two.clone();
    }

    let tol = T::tolerance(work);
    let mut steps = 0;
    while steps < 200 {
        let gx = horner(&g, &x);
        if gx.is_zero() {
            break;
        }
        let next = x.clone() - gx / horner(&dg, &x);
        steps += 1;
        let delta = (next.clone() - x.clone()).abs();
        x = next;
        if delta <= tol {
            break;
        }
    }
    assert!(x > T::zero() && x < T::one(), "saddle point left (0, 1)");

    let f: Vec<i64> = vec![1; q as usize];
    let constant = horner(&f, &x) / powi(&x, q - 1).cbrt();
    let residual = horner(&g, &x).abs();
    Ok(SaddleResult {
        q,
        digits,
        x0: x,
        constant,
        residual,
        newton_steps: steps,
    })
}

/// Growth constant for `q`, rounded to `digits` places.
pub fn growth_constant(q: u32, digits: u32) -> Result<BigFixed> {
    Ok(saddle_point::<BigFixed>(q, digits)?
        .constant
        .rounded(digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::recurrence::alpha_exact;
    use crate::golden::GROWTH_TABLE;

    fn fx(s: &str) -> BigFixed {
        s.parse().unwrap()
    }

    #[test]
    fn binary_case_closed_form() {
        let r = saddle_point::<BigFixed>(2, 30).unwrap();
        assert_eq!(r.x0, fx("0.5"));
        let want = fx("1.5") * BigFixed::from_integer(2).with_scale(45).cbrt();
        assert!((r.constant.clone() - want).abs() <= BigFixed::ulp(38));
        assert!((r.constant.to_f64() - 1.889_881_574_8).abs() < 1e-10);
    }

    #[test]
    fn ternary_case_closed_form() {
        let r = saddle_point::<BigFixed>(3, 40).unwrap();
        // 4x^2 + x - 2 = 0
        let sqrt33 = BigFixed::from_integer(33).with_scale(50).sqrt();
        let x0 = (sqrt33 - BigFixed::from_integer(1)) / BigFixed::from_integer(8);
        assert!((r.x0.clone() - x0).abs() <= BigFixed::ulp(48));
        assert!((r.constant.clone() - alpha_exact(50)).abs() <= BigFixed::ulp(45));
        assert!(r.x0.to_decimal_string().starts_with("0.5930703308"));
    }

    #[test]
    fn printed_q4_constant() {
        assert_eq!(
            growth_constant(4, 18).unwrap().to_decimal_string(),
            "3.610718613276039350"
        );
        let c = growth_constant(4, 30).unwrap();
        assert!((c - fx("3.610718613276039349")).abs() <= BigFixed::ulp(18));
    }

    #[test]
    fn residual_below_requested_precision() {
        for q in 2..=31 {
            let r = saddle_point::<BigFixed>(q, 40).unwrap();
            assert!(
                r.residual < BigFixed::ulp(40),
                "q={q} residual {}",
                r.residual
            );
            assert!(r.x0 > BigFixed::from_integer(0) && r.x0 < BigFixed::from_integer(1));
        }
    }

    #[test]
    fn f64_route_agrees_with_bigfixed() {
        for q in 2..=31 {
            let fast = saddle_point::<f64>(q, 15).unwrap().constant;
            let exact = saddle_point::<BigFixed>(q, 30).unwrap().constant.to_f64();
            assert!(
                (fast - exact).abs() / exact < 1e-13,
                "q={q}: {fast} vs {exact}"
            );
            let single = saddle_point::<f32>(q, 6).unwrap().constant as f64;
            assert!((single - exact).abs() / exact < 1e-5, "q={q}");
        }
    }

    #[test]
    fn increasing_and_below_q() {
        let consts: Vec<BigFixed> = (2..=31).map(|q| growth_constant(q, 30).unwrap()).collect();
        assert!(consts.windows(2).all(|w| w[0] < w[1]));
        for (q, c) in (2..=31).zip(&consts) {
            assert!(c < &BigFixed::from_integer(q));
        }
        for (q, _) in GROWTH_TABLE {
            assert!(growth_constant(q, 20).unwrap() < BigFixed::from_integer(q));
        }
    }

    #[test]
    fn rejects_q_below_two() {
        assert!(saddle_point::<f64>(1, 10).is_err());
    }
}

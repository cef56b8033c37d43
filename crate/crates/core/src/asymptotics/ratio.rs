//! Growth constants from exact coefficients, by ratio extrapolation.
//!
//! With `a(n) = [x^((q-1)n/3)] f(x)^n` for `n` divisible by 3, the cube root of
//! `a(n+3)/a(n)` approaches the growth constant with error `O(1/n)`. One
//! Richardson step between two such ratios removes that term. The ratio spans
//! `[n, n+3]`, so the abscissa used is its midpoint `n + 3/2`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::qnomial::qnomial_row;
use crate::scalar::Real;

/// Value at `h = 0` of the line through `(h1, v1)` and `(h2, v2)`.
pub fn richardson_step<T: Real>(h1: &T, v1: &T, h2: &T, v2: &T) -> T {
    (h1.clone() * v2.clone() - h2.clone() * v1.clone()) / (h1.clone() - h2.clone())
}

/// Polynomial extrapolation to `h = 0` through all points (Neville's scheme).
pub fn richardson_limit<T: Real>(hs: &[T], vs: &[T]) -> T {
    assert_eq!(hs.len(), vs.len());
    assert!(!hs.is_empty());
    let mut table = vs.to_vec();
    for level in 1..hs.len() {
        for i in 0..hs.len() - level {
            table[i] = richardson_step(&hs[i], &table[i], &hs[i + level], &table[i + 1]);
        }
    }
    table[0].clone()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEstimate<T> {
    pub q: u32,
    pub n_max: u32,
    /// `(n, cbrt(a(n+3)/a(n)))` for the two ratios used.
    pub ratios: Vec<(u32, T)>,
    pub estimate: T,
    pub method: &'static str,
}

fn central_coeff(n: u32, q: u32) -> BigInt {
    let row = qnomial_row(n, q).expect("q already validated");
    BigInt::from(row.get(((q - 1) * n / 3) as i64))
}

/// Extrapolated growth constant from `a(n)` up to `n = n_max`.
pub fn growth_constant_ratio<T: Real>(q: u32, n_max: u32, digits: u32) -> Result<RatioEstimate<T>> {
    if q < 2 {
        return domain(format!("q must be at least 2, got {q}"));
    }
    if !n_max.is_multiple_of(3) || n_max < 30 {
        return domain(format!(
            "n_max must be a multiple of 3 and at least 30, got {n_max}"
        ));
    }
    let hi = n_max - 3;
    let lo = 3 * (n_max / 6) - 3;
    let ratio = |n: u32| -> T {
        T::from_ratio(&central_coeff(n + 3, q), &central_coeff(n, q), digits).cbrt()
    };
    let (r_lo, r_hi) = (ratio(lo), ratio(hi));
    // Abscissas 1/(n + 3/2), written with doubled integers.
    let h = |n: u32| T::one().at_precision(digits) / T::int(2 * n as i64 + 3);
    let estimate = richardson_step(&h(lo), &r_lo, &h(hi), &r_hi);
    Ok(RatioEstimate {
        q,
        n_max,
        ratios: vec![(lo, r_lo), (hi, r_hi)],
        estimate,
        method: "one Richardson step in 1/(n + 3/2)",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::saddle::saddle_point;
    use crate::bigfixed::BigFixed;

    #[test]
    fn richardson_exact_on_lines_and_polynomials() {
        let v = |h: f64| 2.0 + 3.0 * h;
        assert!((richardson_step(&0.1, &v(0.1), &0.05, &v(0.05)) - 2.0).abs() < 1e-14);
        let cubic = |h: f64| 1.5 - h + 4.0 * h * h - 2.0 * h * h * h;
        let hs = [0.4, 0.2, 0.1, 0.05];
        let vs: Vec<f64> = hs.iter().map(|&h| cubic(h)).collect();
        assert!((richardson_limit(&hs, &vs) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn richardson_accelerates_known_sequence() {
        // (1 + 1/n)^n -> e with O(1/n) error.
        let ns = [64.0f64, 128.0, 256.0, 512.0];
        let hs: Vec<f64> = ns.iter().map(|n| 1.0 / n).collect();
        let vs: Vec<f64> = ns.iter().map(|&n: &f64| (1.0 + 1.0 / n).powf(n)).collect();
        let raw = (vs[3] - std::f64::consts::E).abs();
        let acc = (richardson_limit(&hs, &vs) - std::f64::consts::E).abs();
        assert!(acc < raw * 1e-4, "raw {raw} acc {acc}");
    }

    #[test]
    fn agrees_with_saddle_for_small_q() {
        for q in [2u32, 3, 4, 5, 8] {
            let est = growth_constant_ratio::<f64>(q, 120, 30).unwrap().estimate;
            let saddle = saddle_point::<f64>(q, 15).unwrap().constant;
            assert!(
                (est - saddle).abs() / saddle < 1e-4,
                "q={q}: {est} vs {saddle}"
            );
        }
    }

    #[test]
    fn bigfixed_and_f64_estimates_agree() {
        let a = growth_constant_ratio::<BigFixed>(3, 120, 30)
            .unwrap()
            .estimate
            .to_f64();
        let b = growth_constant_ratio::<f64>(3, 120, 30).unwrap().estimate;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(growth_constant_ratio::<f64>(3, 121, 20).is_err());
        assert!(growth_constant_ratio::<f64>(3, 27, 20).is_err());
        assert!(growth_constant_ratio::<f64>(1, 120, 20).is_err());
    }
}

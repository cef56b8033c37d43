//! Leading constant of the sharp q = 3 bound and its first correction.
//!
//! Near `k = 2n/3` the row `C(n, k)_2` decays geometrically with ratio `x0`
//! toward smaller `k`, so `3 sum_{k<=t} C(n,k)_2 - C(n,t)_2 ~ C(n,t)_2 (2 + x0)/(1 - x0)`.
//! The central coefficient itself is `alpha^n / sqrt(2 pi n v)` to leading order,
//! with `v = x0 mu'(x0)` the variance of the tilted digit distribution and
//! `mu(x) = x f'(x)/f(x)`, `f = 1 + x + x^2`.

use serde::Serialize;

use super::recurrence::alpha_exact;
use super::saddle::saddle_point;
use super::GUARD_DIGITS;
use crate::bigfixed::BigFixed;
use crate::bounds::sharp_bound;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// `(3/(1 - x0) - 1) / sqrt(2 pi x0 mu'(x0))` at saddle point `x0` of q = 3.
pub fn leading_constant_with<T: Real>(digits: u32) -> T {
    let work = digits + GUARD_DIGITS;
    let x = saddle_point::<T>(3, digits)
        .expect("q = 3 is valid")
        .x0
        .at_precision(work);
    let one = T::one();
    let two = T::int(2);
    let f = one.clone() + x.clone() + x.clone() * x.clone();
    let df = one.clone() + two.clone() * x.clone();
    // mu' = f'/f + x f''/f - x f'^2/f^2
    let dmu = df.clone() / f.clone() + two.clone() * x.clone() / f.clone()
        - x.clone() * df.clone() * df / (f.clone() * f);
    let variance = x.clone() * dmu;
    let tail = T::int(3) / (one.clone() - x) - one;
    tail / (two * T::pi(work) * variance).sqrt()
}

/// Leading constant rounded to `digits` places.
pub fn leading_constant(digits: u32) -> BigFixed {
    leading_constant_with::<BigFixed>(digits).rounded(digits)
}

/// `sharp_bound(n) sqrt(n) / alpha^n` at `scale` digits.
pub fn normalized_sharp_bound(n: u32, scale: u32) -> Result<BigFixed> {
    let value = BigFixed::from_integer(sharp_bound(n)?.value);
    let alpha_n = alpha_exact(scale + GUARD_DIGITS).powi(n);
    let root_n = BigFixed::from_integer(n)
        .with_scale(scale + GUARD_DIGITS)
        .sqrt();
    Ok((value * root_n / alpha_n).with_scale(scale))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalConstant {
    pub ns: Vec<u32>,
    pub normalized: Vec<BigFixed>,
    pub extrapolated: BigFixed,
}

/// Polynomial extrapolation in `1/n` of the normalized sharp bound.
pub fn empirical_leading_constant(ns: &[u32], digits: u32) -> Result<EmpiricalConstant> {
    if ns.is_empty() || ns.iter().any(|n| n % 3 != 0 || *n == 0) {
        return domain("sample sizes must be positive multiples of 3");
    }
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    let work = digits + GUARD_DIGITS;
    let normalized = sorted
        .iter()
        .map(|&n| normalized_sharp_bound(n, work))
        .collect::<Result<Vec<_>>>()?;
    let hs: Vec<BigFixed> = sorted
        .iter()
        .map(|&n| BigFixed::from_ratio(&1.into(), &n.into(), work))
        .collect();
    let extrapolated = super::ratio::richardson_limit(&hs, &normalized).rounded(digits);
    Ok(EmpiricalConstant {
        ns: sorted,
        normalized,
        extrapolated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FirstCorrection {
    pub n_lo: u32,
    pub n_hi: u32,
    /// `n (s(n)/C - 1)` at the two sample points.
    pub scaled_lo: BigFixed,
    pub scaled_hi: BigFixed,
    pub estimate: BigFixed,
}

impl FirstCorrection {
    pub fn value(&self) -> f64 {
        self.estimate.to_f64()
    }
}

/// Estimate `c1` in `s(n)/C = 1 + c1/n + O(1/n^2)` from `n_max/2` and `n_max`.
pub fn first_correction_estimate(n_max: u32) -> Result<FirstCorrection> {
    if !n_max.is_multiple_of(3) || n_max < 600 {
        return domain(format!(
            "n_max must be a multiple of 3 and at least 600, got {n_max}"
        ));
    }
    let scale = 40;
    let c = leading_constant_with::<BigFixed>(scale);
    let n_lo = 3 * (n_max / 6);
    let scaled = |n: u32| -> Result<BigFixed> {
        let s = normalized_sharp_bound(n, scale)?;
        Ok(BigFixed::from_integer(n) * (s / c.clone() - BigFixed::from_integer(1)))
    };
    let (u_lo, u_hi) = (scaled(n_lo)?, scaled(n_max)?);
    let estimate = super::ratio::richardson_step(
        &BigFixed::from_ratio(&1.into(), &n_lo.into(), scale),
        &u_lo,
        &BigFixed::from_ratio(&1.into(), &n_max.into(), scale),
        &u_hi,
    );
    Ok(FirstCorrection {
        n_lo,
        n_hi: n_max,
        scaled_lo: u_lo.rounded(12),
        scaled_hi: u_hi.rounded(12),
        estimate: estimate.rounded(12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(s: &str) -> BigFixed {
        s.parse().unwrap()
    }

    #[test]
    fn closed_form_routes_agree() {
        let big = leading_constant(30).to_f64();
        let fast = leading_constant_with::<f64>(15);
        assert!((big - fast).abs() < 1e-13);
        assert!(leading_constant(30)
            .to_decimal_string()
            .starts_with("3.326762746"));
    }

    #[test]
    fn exceeds_gaussian_normalizer_times_three() {
        let x = saddle_point::<f64>(3, 15).unwrap().x0;
        let f = 1.0 + x + x * x;
        let df = 1.0 + 2.0 * x;
        let v = x * (df / f + 2.0 * x / f - x * df * df / (f * f));
        let c = leading_constant_with::<f64>(15);
        assert!(c > 0.0 && c > 3.0 / (2.0 * std::f64::consts::PI * v).sqrt());
    }

    #[test]
    fn variance_by_finite_differences() {
        // v = x mu'(x); compare mu' with a central difference.
        let x = saddle_point::<f64>(3, 15).unwrap().x0;
        let mu = |x: f64| x * (1.0 + 2.0 * x) / (1.0 + x + x * x);
        let h = 1e-5;
        let fd = (mu(x + h) - mu(x - h)) / (2.0 * h);
        let f = 1.0 + x + x * x;
        let df = 1.0 + 2.0 * x;
        let analytic = df / f + 2.0 * x / f - x * df * df / (f * f);
        assert!((fd - analytic).abs() < 1e-9);
        // The saddle is where the tilted mean digit equals 2/3.
        assert!((mu(x) - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn normalized_bound_approaches_constant() {
        let c = leading_constant(20);
        let s = normalized_sharp_bound(300, 20).unwrap();
        let rel = ((s - c.clone()) / c).abs();
        assert!(rel < fx("0.02"));
    }

    #[test]
    fn small_sample_extrapolation() {
        let e = empirical_leading_constant(&[75, 150, 300, 600], 15).unwrap();
        let c = leading_constant(15);
        let rel = ((e.extrapolated - c.clone()) / c).abs();
        assert!(rel < fx("0.001"), "rel {rel}");
    }

    #[test]
    fn correction_domain() {
        assert!(first_correction_estimate(601).is_err());
        assert!(first_correction_estimate(300).is_err());
    }

    #[test]
    fn correction_negative_at_600() {
        let c1 = first_correction_estimate(600).unwrap().value();
        assert!(c1 < 0.0);
        assert!(
            (c1 + 5.154_371_415_6).abs() / 5.154_371_415_6 < 0.05,
            "{c1}"
        );
    }
}

//! Decimal fixed-point reals backed by arbitrary-precision integers.
//!
//! A [`BigFixed`] is `mantissa * 10^-scale`. Binary operations work at the
//! larger of the two operand scales and round toward negative infinity, so an
//! integer constant (scale 0) mixes freely with a value carrying many digits.
//! Roots are computed by integer Newton iteration on the scaled mantissa and
//! are exact floors at the result scale.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BigFixed {
    mantissa: BigInt,
    scale: u32,
}

pub(crate) fn pow10(exp: u32) -> BigInt {
    BigInt::from(10u32).pow(exp)
}

/// Floor of the square root, by Newton iteration from above.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n < &BigUint::from(2u32) {
        return n.clone();
    }
    let mut x = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Floor of the cube root, by Newton iteration from above.
pub fn icbrt(n: &BigUint) -> BigUint {
    if n < &BigUint::from(8u32) {
        return if n.is_zero() {
            BigUint::zero()
        } else {
            BigUint::one()
        };
    }
    let three = BigUint::from(3u32);
    let mut x = BigUint::one() << n.bits().div_ceil(3);
    loop {
        let y = (&x * 2u32 + n / (&x * &x)) / &three;
        if y >= x {
            return x;
        }
        x = y;
    }
}

impl BigFixed {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        BigFixed { mantissa, scale }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        BigFixed::new(value.into(), 0)
    }

    /// `num / den` floored at `scale` decimal places.
    pub fn from_ratio(num: &BigInt, den: &BigInt, scale: u32) -> Self {
        assert!(!den.is_zero(), "BigFixed::from_ratio: zero denominator");
        BigFixed::new((num * pow10(scale)).div_floor(den), scale)
    }

    /// `10^-scale`, one unit in the last place at that scale.
    pub fn ulp(scale: u32) -> Self {
        BigFixed::new(BigInt::one(), scale)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Re-express at `scale` digits, flooring if digits are dropped.
    pub fn with_scale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => BigFixed::new(&self.mantissa * pow10(scale - self.scale), scale),
            Ordering::Less => {
                BigFixed::new(self.mantissa.div_floor(&pow10(self.scale - scale)), scale)
            }
        }
    }

    /// Re-express at `scale` digits, rounding half away from zero.
    pub fn rounded(&self, scale: u32) -> Self {
        if scale >= self.scale {
            return self.with_scale(scale);
        }
        let unit = pow10(self.scale - scale);
        let half = &unit / 2;
        let mag = self.mantissa.abs();
        let rounded: BigInt = (mag + half) / unit;
        let mantissa = if self.mantissa.is_negative() {
            -rounded
        } else {
            rounded
        };
        BigFixed::new(mantissa, scale)
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFixed::new(self.mantissa.abs(), self.scale)
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let scale = self.scale.max(other.scale);
        (
            self.with_scale(scale).mantissa,
            other.with_scale(scale).mantissa,
            scale,
        )
    }

    /// Floor of the square root at this value's scale.
    ///
    /// Panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigFixed::sqrt of a negative value");
        let radicand = (&self.mantissa * pow10(self.scale)).magnitude().clone();
        BigFixed::new(BigInt::from(isqrt(&radicand)), self.scale)
    }

    /// Real cube root at this value's scale (floor of the magnitude, sign kept).
    pub fn cbrt(&self) -> Self {
        let radicand = (&self.mantissa * pow10(2 * self.scale)).magnitude().clone();
        let root = BigInt::from(icbrt(&radicand));
        let root = if self.is_negative() { -root } else { root };
        BigFixed::new(root, self.scale)
    }

    pub fn powi(&self, exp: u32) -> Self {
        let mut acc = BigFixed::new(pow10(self.scale), self.scale);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// pi floored at `scale` digits (Machin's arctangent formula).
    pub fn pi(scale: u32) -> Self {
        let work = scale + 10;
        let unity = pow10(work);
        let arctan_inv = |x: u32| -> BigInt {
            let x = BigInt::from(x);
            let x2 = &x * &x;
            let mut power = &unity / &x;
            let mut sum = BigInt::zero();
            let mut k = 0u32;
            while !power.is_zero() {
                let term = &power / BigInt::from(2 * k + 1);
                if k.is_multiple_of(2) {
                    sum += term;
                } else {
                    sum -= term;
                }
                power /= &x2;
                k += 1;
            }
            sum
        };
        let pi = arctan_inv(5) * 16 - arctan_inv(239) * 4;
        BigFixed::new(pi, work).with_scale(scale)
    }

    /// Plain decimal rendering with exactly `scale` fractional digits.
    pub fn to_decimal_string(&self) -> String {
        let digits = self.mantissa.magnitude().to_str_radix(10);
        let sign = if self.is_negative() { "-" } else { "" };
        let scale = self.scale as usize;
        if scale == 0 {
            return format!("{sign}{digits}");
        }
        let padded = if digits.len() <= scale {
            format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = padded.split_at(padded.len() - scale);
        format!("{sign}{int}.{frac}")
    }

    pub fn to_f64(&self) -> f64 {
        // Through the decimal string so the conversion is correctly rounded.
        let s = self.to_decimal_string();
        s.parse::<f64>().unwrap_or(if self.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
    }

    /// Best f64 approximation of a ratio of integers of any size.
    pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
        let shift = num.bits() as i64 - den.bits() as i64;
        let (n, d) = if shift > 60 {
            (num.clone(), den << (shift - 60) as usize)
        } else {
            (num << (60 - shift) as usize, den.clone())
        };
        let q = (n / d).to_f64().unwrap_or(f64::NAN);
        q * 2f64.powi((shift - 60) as i32)
    }
}

impl FromStr for BigFixed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("not a decimal number: {s:?}"),
        };
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let magnitude = BigInt::from_str(&digits).map_err(|_| bad())?;
        let mantissa = if negative { -magnitude } else { magnitude };
        Ok(BigFixed::new(mantissa, frac.len() as u32))
    }
}

impl fmt::Display for BigFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Serialize for BigFixed {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("BigFixed", 3)?;
        st.serialize_field("mantissa", &self.mantissa.to_str_radix(10))?;
        st.serialize_field("scale", &self.scale)?;
        st.serialize_field("decimal", &self.to_decimal_string())?;
        st.end()
    }
}

impl PartialEq for BigFixed {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigFixed {}

impl PartialOrd for BigFixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFixed {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl<'a> Add<&'a BigFixed> for &'a BigFixed {
    type Output = BigFixed;
    fn add(self, rhs: &BigFixed) -> BigFixed {
        let (a, b, scale) = self.aligned(rhs);
        BigFixed::new(a + b, scale)
    }
}

impl<'a> Sub<&'a BigFixed> for &'a BigFixed {
    type Output = BigFixed;
    fn sub(self, rhs: &BigFixed) -> BigFixed {
        let (a, b, scale) = self.aligned(rhs);
        BigFixed::new(a - b, scale)
    }
}

impl<'a> Mul<&'a BigFixed> for &'a BigFixed {
    type Output = BigFixed;
    fn mul(self, rhs: &BigFixed) -> BigFixed {
        let scale = self.scale.max(rhs.scale);
        BigFixed::new(&self.mantissa * &rhs.mantissa, self.scale + rhs.scale).with_scale(scale)
    }
}

impl<'a> Div<&'a BigFixed> for &'a BigFixed {
    type Output = BigFixed;
    fn div(self, rhs: &BigFixed) -> BigFixed {
        assert!(!rhs.mantissa.is_zero(), "BigFixed division by zero");
        let scale = self.scale.max(rhs.scale);
        let num = &self.mantissa * pow10(scale - self.scale + rhs.scale);
        BigFixed::new(num.div_floor(&rhs.mantissa), scale)
    }
}

impl<'a> Rem<&'a BigFixed> for &'a BigFixed {
    type Output = BigFixed;
    fn rem(self, rhs: &BigFixed) -> BigFixed {
        let (a, b, scale) = self.aligned(rhs);
        BigFixed::new(a % b, scale)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<BigFixed> for BigFixed {
            type Output = BigFixed;
            fn $m(self, rhs: BigFixed) -> BigFixed { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a BigFixed> for BigFixed {
            type Output = BigFixed;
            fn $m(self, rhs: &BigFixed) -> BigFixed { (&self).$m(rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div, Rem::rem);

impl Neg for BigFixed {
    type Output = BigFixed;
    fn neg(self) -> BigFixed {
        BigFixed::new(-self.mantissa, self.scale)
    }
}

impl Neg for &BigFixed {
    type Output = BigFixed;
    fn neg(self) -> BigFixed {
        BigFixed::new(-&self.mantissa, self.scale)
    }
}

impl Zero for BigFixed {
    fn zero() -> Self {
        BigFixed::from_integer(0)
    }
    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl One for BigFixed {
    fn one() -> Self {
        BigFixed::from_integer(1)
    }
}

impl Num for BigFixed {
    type FromStrRadixErr = Error;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self> {
        if radix != 10 {
            return Err(Error::Unsupported(format!("BigFixed radix {radix}")));
        }
        s.parse()
    }
}

impl FromPrimitive for BigFixed {
    fn from_i64(n: i64) -> Option<Self> {
        Some(BigFixed::from_integer(n))
    }

    fn from_u64(n: u64) -> Option<Self> {
        Some(BigFixed::from_integer(n))
    }

    fn from_f64(n: f64) -> Option<Self> {
        if !n.is_finite() {
            return None;
        }
        // Shortest round-trip representation, then exact decimal parse.
        let s = format!("{n:?}");
        if s.contains('e') {
            let (m, e) = s.split_once('e')?;
            let m: BigFixed = m.parse().ok()?;
            let e: i32 = e.parse().ok()?;
            return Some(if e >= 0 {
                BigFixed::new(m.mantissa * pow10(e as u32), m.scale)
            } else {
                BigFixed::new(m.mantissa, m.scale + (-e) as u32)
            });
        }
        s.parse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Roots;
    use proptest::prelude::*;

    fn fx(s: &str) -> BigFixed {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(fx("3.250").to_decimal_string(), "3.250");
        assert_eq!(fx("-0.05").to_decimal_string(), "-0.05");
        assert_eq!(fx("12").to_decimal_string(), "12");
        assert_eq!(fx("3.25"), fx("3.2500"));
        assert!("1.2.3".parse::<BigFixed>().is_err());
        assert!("abc".parse::<BigFixed>().is_err());
    }

    #[test]
    fn arithmetic_takes_larger_scale() {
        let a = fx("1.5");
        let b = BigFixed::from_integer(2);
        assert_eq!((&a * &b).to_decimal_string(), "3.0");
        assert_eq!((&b / &fx("3.0000")).to_decimal_string(), "0.6666");
        assert_eq!((-fx("1.0") / fx("3.00")).to_decimal_string(), "-0.34");
    }

    #[test]
    fn rounding_half_away() {
        assert_eq!(fx("2.345").rounded(2).to_decimal_string(), "2.35");
        assert_eq!(fx("-2.345").rounded(2).to_decimal_string(), "-2.35");
        assert_eq!(fx("2.344").rounded(2).to_decimal_string(), "2.34");
    }

    #[test]
    fn sqrt_two_known_digits() {
        let r = BigFixed::from_integer(2).with_scale(30).sqrt();
        assert_eq!(r.to_decimal_string(), "1.414213562373095048801688724209");
    }

    #[test]
    fn cbrt_exact_and_negative() {
        assert_eq!(
            BigFixed::from_integer(27).with_scale(5).cbrt(),
            BigFixed::from_integer(3)
        );
        assert_eq!(fx("-8.000").cbrt(), fx("-2"));
        assert_eq!(
            BigFixed::from_integer(2)
                .with_scale(20)
                .cbrt()
                .to_decimal_string(),
            "1.25992104989487316476"
        );
    }

    #[test]
    fn pi_digits() {
        assert_eq!(
            BigFixed::pi(40).to_decimal_string(),
            "3.1415926535897932384626433832795028841971"
        );
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = fx("1.0001");
        let mut acc = BigFixed::from_integer(1);
        for _ in 0..7 {
            acc = &acc * &x;
        }
        assert_eq!(x.powi(7), acc);
        assert_eq!(x.powi(0), BigFixed::from_integer(1));
    }

    #[test]
    fn from_f64_is_exact_decimal_of_shortest_repr() {
        assert_eq!(BigFixed::from_f64(0.1).unwrap(), fx("0.1"));
        assert_eq!(BigFixed::from_f64(1e-7).unwrap(), fx("0.0000001"));
        assert_eq!(
            BigFixed::from_f64(2.5e20).unwrap(),
            fx("250000000000000000000")
        );
    }

    #[test]
    fn ratio_to_f64_huge_operands() {
        let num = BigInt::from(10u32).pow(400) * 3;
        let den = BigInt::from(10u32).pow(399) * 7;
        assert!((BigFixed::ratio_to_f64(&num, &den) - 30.0 / 7.0).abs() < 1e-14);
    }

    proptest! {
        // Integer Newton roots against num-integer's independent implementation.
        #[test]
        fn newton_roots_match_reference(bytes in proptest::collection::vec(any::<u8>(), 1..40)) {
            let n = BigUint::from_bytes_le(&bytes);
            prop_assert_eq!(isqrt(&n), Roots::sqrt(&n));
            prop_assert_eq!(icbrt(&n), Roots::cbrt(&n));
        }

        #[test]
        fn sqrt_is_floor_at_scale(m in 0u64..u64::MAX, s in 0u32..20) {
            let x = BigFixed::new(BigInt::from(m), s);
            let r = x.sqrt();
            let up = &r + &BigFixed::ulp(s);
            prop_assert!(BigFixed::new(r.mantissa() * r.mantissa(), 2 * s) <= x);
            prop_assert!(BigFixed::new(up.mantissa() * up.mantissa(), 2 * s) > x);
        }
    }
}

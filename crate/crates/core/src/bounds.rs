//! Upper bounds on progression-free subsets of F_3^n from the polynomial
//! method, parametrised by the degree cutoff `d`.
//!
//! For every `0 <= d <= 2n` a progression-free `A` satisfies
//! `|A| <= 2|M(n, floor(d/2))| + 3^n - |M(n, d)|`. Odd `d` is allowed: a
//! monomial of total degree `<= d` in `(b, c)` has at most `floor(d/2)` of its
//! degree on one of the two sides.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::qnomial::{qnomial_row, series_coeff_bound};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    ForD,
    Optimal,
    Theorem,
    Sharp,
    Series,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identity {
    pub name: String,
    pub pass: bool,
}

impl Identity {
    fn new(name: &str, pass: bool) -> Self {
        Identity {
            name: name.to_string(),
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub q: u32,
    pub d: Option<u32>,
    #[serde(serialize_with = "crate::report::ser_decimal")]
    pub value: BigUint,
    pub method: BoundMethod,
    pub identities: Vec<Identity>,
}

impl BoundReport {
    pub fn identities_pass(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }
}

/// Family bound from a row's prefix sums; `prefix[k] = |M(n, k)|`.
fn family_value(prefix: &[BigUint], full: &BigUint, d: usize) -> BigUint {
    let top = prefix.len() - 1;
    let at = |k: usize| &prefix[k.min(top)];
    // 3^n - |M(n,d)| >= 0, so add before subtracting.
    at(d / 2) * 2u32 + full - at(d)
}

fn prefix_sums(n: u32) -> Vec<BigUint> {
    let row = qnomial_row(n, 3).expect("q = 3 is valid");
    let mut acc = BigUint::default();
    row.coeffs
        .iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect()
}

/// The bound `2|M(n, floor(d/2))| + 3^n - |M(n, d)|` for a single `d`.
pub fn bound_for_d(n: u32, d: i64, q: u32) -> Result<BoundReport> {
    if q != 3 {
        return Err(Error::Unsupported(format!(
            "the rank bound is implemented for q = 3 only, got q = {q}"
        )));
    }
    let top = 2 * n as i64;
    if d < 0 || d > top {
        return domain(format!("d = {d} outside [0, {top}]"));
    }
    let prefix = prefix_sums(n);
    let full = BigUint::from(3u32).pow(n);
    Ok(BoundReport {
        n,
        q,
        d: Some(d as u32),
        value: family_value(&prefix, &full, d as usize),
        method: BoundMethod::ForD,
        identities: Vec::new(),
    })
}

/// Exhaustive minimum of [`bound_for_d`] over integer `d in [0, 2n]`, ties to the smaller `d`.
pub fn optimal_bound(n: u32) -> BoundReport {
    let prefix = prefix_sums(n);
    let full = BigUint::from(3u32).pow(n);
    let values: Vec<BigUint> = (0..prefix.len())
        .map(|d| family_value(&prefix, &full, d))
        .collect();
    let (best_d, best) = values
        .iter()
        .enumerate()
        .min_by(|(da, a), (db, b)| a.cmp(b).then(da.cmp(db)))
        .expect("at least d = 0 is a candidate");
    let minimal = values.iter().all(|v| v >= best);
    BoundReport {
        n,
        q: 3,
        d: Some(best_d as u32),
        value: best.clone(),
        method: BoundMethod::Optimal,
        identities: vec![Identity::new("not_above_any_d", minimal)],
    }
}

/// `3 * sum_{k <= floor(2n/3)} C(n, k)_2`.
pub fn theorem_bound(n: u32) -> BoundReport {
    let row = qnomial_row(n, 3).expect("q = 3 is valid");
    BoundReport {
        n,
        q: 3,
        d: None,
        value: row.prefix_sum(2 * n as i64 / 3) * 3u32,
        method: BoundMethod::Theorem,
        identities: Vec::new(),
    }
}

/// `3 * sum_{k <= 2n/3} C(n, k)_2 - C(n, 2n/3)_2` for `n` divisible by 3,
/// cross-checked against the `d = 4n/3` family member and the series coefficient.
pub fn sharp_bound(n: u32) -> Result<BoundReport> {
    if !n.is_multiple_of(3) {
        return domain(format!("sharp bound needs n divisible by 3, got n = {n}"));
    }
    let row = qnomial_row(n, 3)?;
    let t = 2 * n as i64 / 3;
    let value = row.prefix_sum(t) * 3u32 - row.get(t);

    let via_family = bound_for_d(n, 4 * n as i64 / 3, 3)?.value;
    let via_series = series_coeff_bound(n, 3)?;
    Ok(BoundReport {
        n,
        q: 3,
        d: Some(4 * n / 3),
        identities: vec![
            Identity::new("equals_bound_for_d_4n_over_3", via_family == value),
            Identity::new("equals_series_coefficient", via_series == value),
        ],
        value,
        method: BoundMethod::Sharp,
    })
}

/// The general-`q` series-coefficient bound, wrapped as a report.
pub fn series_bound(n: u32, q: u32) -> Result<BoundReport> {
    Ok(BoundReport {
        n,
        q,
        d: None,
        value: series_coeff_bound(n, q)?,
        method: BoundMethod::Series,
        identities: Vec::new(),
    })
}

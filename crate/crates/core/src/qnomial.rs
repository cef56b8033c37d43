//! Exact coefficient rows of `(1 + x + ... + x^(q-1))^n`.
//!
//! Rows are built with the sliding-window recurrence
//! `C(n, k) = C(n, k-1) + C(n-1, k) - C(n-1, k-q)` and memoised per `(n, q)`.
//! A request for row `n` extends the largest cached row below it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QNomialRow {
    pub n: u32,
    pub q: u32,
    #[serde(serialize_with = "crate::report::ser_decimal_vec")]
    pub coeffs: Vec<BigUint>,
}

impl QNomialRow {
    /// Top degree `(q-1)n`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^k`, zero outside `[0, (q-1)n]`.
    pub fn get(&self, k: i64) -> BigUint {
        self.coeff(k).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn coeff(&self, k: i64) -> Option<&BigUint> {
        usize::try_from(k).ok().and_then(|k| self.coeffs.get(k))
    }

    /// `sum_{i <= k} C(n, i)`, saturating at the full row.
    pub fn prefix_sum(&self, k: i64) -> BigUint {
        if k < 0 {
            return BigUint::zero();
        }
        let end = (k as usize).min(self.degree());
        self.coeffs[..=end].iter().sum()
    }

    fn base(q: u32) -> Self {
        QNomialRow {
            n: 0,
            q,
            coeffs: vec![BigUint::one()],
        }
    }

    /// The next row, `n + 1`.
    fn extend(&self) -> Self {
        let q = self.q as usize;
        let len = self.coeffs.len() + q - 1;
        let mut next: Vec<BigUint> = Vec::with_capacity(len);
        let mut window = BigUint::zero();
        for k in 0..len {
            if let Some(c) = self.coeffs.get(k) {
                window += c;
            }
            if k >= q {
                window -= &self.coeffs[k - q];
            }
            next.push(window.clone());
        }
        QNomialRow {
            n: self.n + 1,
            q: self.q,
            coeffs: next,
        }
    }
}

fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        return domain(format!("q must be at least 2, got {q}"));
    }
    Ok(())
}

#[derive(Default)]
struct RowCache {
    rows: Mutex<HashMap<(u32, u32), Arc<QNomialRow>>>,
}

impl RowCache {
    fn get(&self, n: u32, q: u32) -> Arc<QNomialRow> {
        let start = {
            let rows = self.rows.lock().expect("row cache poisoned");
            if let Some(row) = rows.get(&(n, q)) {
                return Arc::clone(row);
            }
            rows.iter()
                .filter(|((m, r), _)| *r == q && *m < n)
                .max_by_key(|((m, _), _)| *m)
                .map(|(_, row)| Arc::clone(row))
        };
        // Built outside the lock; concurrent builders of the same row agree.
        let mut row = match start {
            Some(r) => (*r).clone(),
            None => QNomialRow::base(q),
        };
        while row.n < n {
            row = row.extend();
        }
        let row = Arc::new(row);
        self.rows
            .lock()
            .expect("row cache poisoned")
            .entry((n, q))
            .or_insert_with(|| Arc::clone(&row));
        row
    }
}

fn cache() -> &'static RowCache {
    static CACHE: OnceLock<RowCache> = OnceLock::new();
    CACHE.get_or_init(RowCache::default)
}

/// Exact coefficient row of `(1 + x + ... + x^(q-1))^n`.
pub fn qnomial_row(n: u32, q: u32) -> Result<Arc<QNomialRow>> {
    check_q(q)?;
    Ok(cache().get(n, q))
}

/// Coefficient of `x^k` in `(1 + x + ... + x^(q-1))^n`; zero for out-of-range `k`.
pub fn qnomial(n: u32, k: i64, q: u32) -> Result<BigUint> {
    check_q(q)?;
    if k < 0 || k > (q as i64 - 1) * n as i64 {
        return Ok(BigUint::zero());
    }
    Ok(cache().get(n, q).get(k))
}

/// `|M(n, d)|`: number of monomials with exponents `< q` and total degree `<= d`.
pub fn mspace_size(n: u32, d: i64, q: u32) -> Result<BigUint> {
    check_q(q)?;
    if d < 0 {
        return domain(format!("degree bound d must be nonnegative, got {d}"));
    }
    Ok(cache().get(n, q).prefix_sum(d))
}

/// Coefficient of `z^t`, `t = (q-1)n/3`, in `(1 + ... + z^(q-1))^n (2 + z)/(1 - z)`.
pub fn series_coeff_bound(n: u32, q: u32) -> Result<BigUint> {
    check_q(q)?;
    let top = (q as u64 - 1) * n as u64;
    if !top.is_multiple_of(3) {
        return domain(format!(
            "(q-1)*n = {top} is not divisible by 3 (q = {q}, n = {n}); replace n by 3n"
        ));
    }
    let t = (top / 3) as i64;
    let row = cache().get(n, q);
    // (2 + z)/(1 - z) = 2 + 3z + 3z^2 + ...
    Ok(row.get(t) * 2u32 + row.prefix_sum(t - 1) * 3u32)
}

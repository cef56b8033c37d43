//! Acceptance criteria as runnable checks, shared by the test target and the CLI.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{
    alpha, characteristic_root, empirical_leading_constant, first_correction_estimate,
    growth_constant, growth_constant_ratio, leading_constant, saddle_point, verify_recurrence,
    GUARD_DIGITS,
};
use crate::bigfixed::BigFixed;
use crate::bounds::{bound_for_d, optimal_bound, sharp_bound, theorem_bound};
use crate::capsearch::{is_progression_free, max_capset};
use crate::clp::{
    clp_split, eval_poly, expand_neg_sum, monomials_up_to, verify_support_bound, FieldPoly,
    PointSet,
};
use crate::error::Result;
use crate::golden::{self, GROWTH_TABLE};
use crate::qnomial::{qnomial, qnomial_row, series_coeff_bound};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Small sizes only; finishes in seconds.
    Quick,
    /// Every criterion at its stated size.
    Full,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    /// Set when a soft criterion misses, or a passing result deserves attention.
    pub warning: Option<String>,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        let mut out = format!(
            "[{tag}] C{} {}: {} ({} ms)",
            self.id, self.name, self.detail, self.elapsed_ms
        );
        if let Some(w) = &self.warning {
            out.push_str(&format!(" WARNING: {w}"));
        }
        out
    }
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "recurrence exactness"),
    (2, "root and alpha digits"),
    (3, "growth-constant table"),
    (4, "method independence"),
    (5, "exact identity chain"),
    (6, "oracle domination"),
    (7, "proof-core verification"),
    (8, "leading constant"),
    (9, "first correction"),
    (10, "property suites"),
];

struct Check {
    pass: bool,
    detail: String,
    warning: Option<String>,
}

impl Check {
    fn new(pass: bool, detail: String) -> Self {
        Check {
            pass,
            detail,
            warning: None,
        }
    }
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed < Duration::from_secs(secs)
}

/// `|value - printed|` in units of the printed last place.
pub fn printed_ulps(value: &BigFixed, printed: &str) -> BigFixed {
    let want: BigFixed = printed.parse().expect("golden values parse");
    let scale = golden::printed_decimals(printed);
    ((value - &want).abs() / BigFixed::ulp(scale)).rounded(2)
}

fn within_one_ulp(value: &BigFixed, printed: &str) -> bool {
    printed_ulps(value, printed) <= BigFixed::from_integer(1)
}

fn c1_recurrence(level: Level) -> Result<Check> {
    let n_max = match level {
        Level::Quick => 40,
        Level::Full => 100,
    };
    let start = Instant::now();
    let r = verify_recurrence(n_max)?;
    let t = start.elapsed();
    Ok(Check::new(
        r.all_zero && within(t, 10),
        format!(
            "n_max={} all_zero={} first_failure={:?}",
            r.n_max, r.all_zero, r.first_failure
        ),
    ))
}

fn c2_digits() -> Result<Check> {
    let start = Instant::now();
    let root = characteristic_root(golden::printed_decimals(golden::CHARACTERISTIC_ROOT));
    let a = alpha(golden::printed_decimals(golden::ALPHA));
    let a_long = alpha(golden::printed_decimals(golden::ALPHA_LONG));
    let t = start.elapsed();
    let ok = within_one_ulp(&root, golden::CHARACTERISTIC_ROOT)
        && within_one_ulp(&a, golden::ALPHA)
        && within_one_ulp(&a_long, golden::ALPHA_LONG);
    Ok(Check::new(
        ok && within(t, 1),
        format!(
            "root={root} ({} ulp) alpha={a} ({} ulp) alpha_long={a_long} ({} ulp)",
            printed_ulps(&root, golden::CHARACTERISTIC_ROOT),
            printed_ulps(&a, golden::ALPHA),
            printed_ulps(&a_long, golden::ALPHA_LONG),
        ),
    ))
}

fn c3_table() -> Result<Check> {
    let start = Instant::now();
    let mut misses = Vec::new();
    for (q, printed) in GROWTH_TABLE {
        let value = growth_constant(q, golden::printed_decimals(printed))?;
        if !within_one_ulp(&value, printed) {
            let exact = growth_constant(q, golden::printed_decimals(printed) + 3)?;
            misses.push(format!(
                "q={q} computed {exact} printed {printed} ({} ulp)",
                printed_ulps(&exact, printed)
            ));
        }
    }
    let t = start.elapsed();
    let detail = if misses.is_empty() {
        format!("{} entries within 1 ulp", GROWTH_TABLE.len())
    } else {
        format!(
            "{}/{} entries within 1 ulp; {}",
            GROWTH_TABLE.len() - misses.len(),
            GROWTH_TABLE.len(),
            misses.join("; ")
        )
    };
    Ok(Check::new(misses.is_empty() && within(t, 5), detail))
}

fn c4_methods() -> Result<Check> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for q in [2u32, 3, 4, 5, 8] {
        let saddle = growth_constant(q, 30)?;
        let ratio = growth_constant_ratio::<BigFixed>(q, 120, 30)?.estimate;
        let rel = ((&ratio - &saddle) / saddle.clone()).abs().to_f64();
        worst = worst.max(rel);
        parts.push(format!("q={q}:{rel:.2e}"));
    }
    let t = start.elapsed();
    Ok(Check::new(
        worst < 1e-4 && within(t, 60),
        format!("max rel diff {worst:.2e} [{}]", parts.join(" ")),
    ))
}

fn c5_identities(level: Level) -> Result<Check> {
    let n_max = match level {
        Level::Quick => 60,
        Level::Full => 300,
    };
    let start = Instant::now();
    let mut first_bad = None;
    for n in (0..=n_max).step_by(3) {
        let sharp = sharp_bound(n)?.value;
        let at_d = bound_for_d(n, 4 * n as i64 / 3, 3)?.value;
        let series = series_coeff_bound(n, 3)?;
        let subtracted = theorem_bound(n).value - qnomial(n, 2 * n as i64 / 3, 3)?;
        if !(sharp == at_d && sharp == series && sharp == subtracted) {
            first_bad = Some(n);
            break;
        }
    }
    let t = start.elapsed();
    Ok(Check::new(
        first_bad.is_none() && within(t, 30),
        format!("n = 0, 3, ..., {n_max}; first mismatch {first_bad:?}"),
    ))
}

fn c6_search(level: Level) -> Result<Check> {
    let expected = [2usize, 4, 9, 20];
    let top = match level {
        Level::Quick => 3,
        Level::Full => 4,
    };
    let mut ok = true;
    let mut parts = Vec::new();
    let mut small_time = Duration::ZERO;
    for n in 1..=top {
        let t0 = Instant::now();
        let r = max_capset(n, None)?;
        let dt = t0.elapsed();
        if n <= 3 {
            small_time += dt;
        } else {
            ok &= within(dt, 600);
        }
        let theorem = theorem_bound(n).value;
        let optimal = optimal_bound(n).value;
        let size = BigUint::from(r.max_size);
        ok &= r.proven_optimal
            && r.max_size == expected[n as usize - 1]
            && is_progression_free(&r.witness)
            && size <= theorem
            && size <= optimal;
        parts.push(format!(
            "n={n}: {} (proven {}, theorem {theorem}, optimal {optimal}, {} ms)",
            r.max_size,
            r.proven_optimal,
            dt.as_millis()
        ));
    }
    ok &= within(small_time, 5);
    Ok(Check::new(ok, parts.join("; ")))
}

fn c7_verifier() -> Result<Check> {
    let start = Instant::now();
    let mut cases: Vec<(u32, u32, PointSet)> = vec![(1, 1, PointSet::from_codes(3, 1, [0, 1])?)];
    for (n, ds) in [(2u32, [2u32, 3]), (3, [3, 4])] {
        let witness = max_capset(n, None)?.witness.to_point_set();
        for d in ds {
            cases.push((n, d, witness.clone()));
        }
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, d, set) in &cases {
        let r = verify_support_bound(*n, *d, set)?;
        ok &= r.diagonal_ok && r.rank_ok && r.support_ok && r.bound_ok && r.all_ok();
        parts.push(format!(
            "(n={n},d={d},|A|={}): {}",
            set.len(),
            if r.all_ok() { "ok" } else { "FAILED" }
        ));
    }
    let t = start.elapsed();
    Ok(Check::new(ok && within(t, 60), parts.join(" ")))
}

/// Number of leading significant digits on which `a` and `b` agree, `-log10 |a/b - 1|`.
pub fn agreeing_digits(a: &BigFixed, b: &BigFixed) -> f64 {
    let rel = ((a - b) / b.clone()).abs();
    if rel.is_zero() {
        return f64::INFINITY;
    }
    -rel.to_f64().log10()
}

fn c8_leading_constant(level: Level) -> Result<Check> {
    let ns: &[u32] = match level {
        Level::Quick => &[75, 150, 300, 600],
        Level::Full => &[300, 600, 1200, 2400],
    };
    let start = Instant::now();
    let printed: BigFixed = golden::LEADING_CONSTANT
        .parse()
        .expect("golden values parse");
    let closed = leading_constant(golden::printed_decimals(golden::LEADING_CONSTANT));
    let digits = agreeing_digits(&closed, &printed);
    let empirical = empirical_leading_constant(ns, 20)?;
    let rel_sharp = ((&empirical.extrapolated - &closed) / closed.clone())
        .abs()
        .to_f64();

    // The unsubtracted 3*sum has constant C + 1/sqrt(2 pi v); report the distance to it too.
    let x = saddle_point::<BigFixed>(3, 30)?.x0;
    let f = BigFixed::from_integer(1) + x.clone() + &x * &x;
    let df = BigFixed::from_integer(1) + BigFixed::from_integer(2) * x.clone();
    let v = &x
        * &(&df / &f + BigFixed::from_integer(2) * x.clone() / f.clone()
            - &x * &df * df.clone() / (&f * &f));
    let central = BigFixed::from_integer(1)
        / (BigFixed::from_integer(2) * BigFixed::pi(30 + GUARD_DIGITS) * v).sqrt();
    let unsubtracted = &closed + &central;
    let rel_full = ((&empirical.extrapolated - &unsubtracted) / unsubtracted.clone())
        .abs()
        .to_f64();
    let t = start.elapsed();

    let pass = digits >= 10.0 && rel_sharp < 1e-3 && within(t, 300);
    let mut check = Check::new(
        pass,
        format!(
            "closed form {closed} vs printed {printed}: {digits:.2} digits; extrapolated over {:?} = {} \
             (rel {rel_sharp:.2e} to closed form, {rel_full:.2e} to the unsubtracted sum)",
            empirical.ns, empirical.extrapolated
        ),
    );
    if digits < 10.0 {
        check.warning = Some(format!(
            "closed form and printed constant agree to only {digits:.2} digits"
        ));
    } else if digits < golden::LEADING_CONSTANT.len() as f64 - 2.0 {
        check.warning = Some(format!(
            "printed constant differs from the closed form after {digits:.2} significant digits"
        ));
    }
    if rel_full < rel_sharp {
        let note =
            "extrapolation is closer to the unsubtracted sum than to the sharp bound".to_string();
        check.warning = Some(match check.warning {
            Some(w) => format!("{w}; {note}"),
            None => note,
        });
    }
    Ok(check)
}

fn c9_first_correction(level: Level) -> Result<Check> {
    let n_max = match level {
        Level::Quick => 600,
        Level::Full => 2400,
    };
    let target: f64 = golden::FIRST_CORRECTION
        .parse()
        .expect("golden values parse");
    let est = first_correction_estimate(n_max)?;
    let rel = (est.value() - target).abs() / target.abs();
    let detail = format!(
        "c1 estimate {} from n = {}, {} (rel {rel:.2e} to {})",
        est.estimate,
        est.n_lo,
        est.n_hi,
        golden::FIRST_CORRECTION
    );
    let mut check = Check::new(true, detail);
    if rel >= 0.05 {
        check.warning = Some(format!("measured c1 = {} is not within 5%", est.estimate));
    }
    Ok(check)
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, d: u32) -> FieldPoly {
    let mut f = FieldPoly::zero(3, n);
    for m in monomials_up_to(n, d, 3) {
        f.add_term(m, rng.gen_range(0..3));
    }
    f
}

fn c10_properties() -> Result<Check> {
    let mut failures = Vec::new();
    let mut rows = 0;
    for q in 2..=6u32 {
        for n in 0..=50u32 {
            rows += 1;
            let row = qnomial_row(n, q)?;
            let top = ((q - 1) * n) as i64;
            let symmetric = (0..=top).all(|k| row.get(k) == row.get(top - k));
            let sum: BigUint = row.coeffs.iter().sum();
            let total = sum == BigUint::from(q).pow(n);
            let recurrence = n == 0 || {
                let prev = qnomial_row(n - 1, q)?;
                (0..=top)
                    .all(|k| row.get(k) == (0..q as i64).map(|j| prev.get(k - j)).sum::<BigUint>())
            };
            if !(symmetric && total && recurrence) {
                failures.push(format!("row n={n} q={q}"));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let split_cases = 128;
    for _ in 0..split_cases {
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(0..=4u32);
        let q = expand_neg_sum(&random_poly(&mut rng, n, d));
        let split = clp_split(&q, d)?;
        if split.reconstruct(3) != q || split.max_key_degree().is_some_and(|k| k > d / 2) {
            failures.push(format!("split n={n} d={d}"));
        }
    }
    let eval_cases = 128;
    for _ in 0..eval_cases {
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(0..=2 * n as u32);
        let p = random_poly(&mut rng, n, d);
        let q = expand_neg_sum(&p);
        let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let c: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let bc: Vec<u32> = b.iter().chain(&c).copied().collect();
        let neg: Vec<u32> = b.iter().zip(&c).map(|(x, y)| (6 - x - y) % 3).collect();
        if eval_poly(&q, &bc)? != eval_poly(&p, &neg)? {
            failures.push(format!("eval n={n}"));
        }
    }
    Ok(Check::new(
        failures.is_empty(),
        format!(
            "{rows} rows, {split_cases} splits, {eval_cases} evaluations; failures: {}",
            if failures.is_empty() {
                "none".to_string()
            } else {
                failures.join(", ")
            }
        ),
    ))
}

/// Run criterion `id` (1..=10).
pub fn run_criterion(id: u32, level: Level) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let start = Instant::now();
    let result = match id {
        1 => c1_recurrence(level),
        2 => c2_digits(),
        3 => c3_table(),
        4 => c4_methods(),
        5 => c5_identities(level),
        6 => c6_search(level),
        7 => c7_verifier(),
        8 => c8_leading_constant(level),
        9 => c9_first_correction(level),
        10 => c10_properties(),
        _ => Ok(Check::new(false, format!("no criterion {id}"))),
    };
    let check = result.unwrap_or_else(|e| Check::new(false, format!("error: {e}")));
    CriterionOutcome {
        id,
        name,
        pass: check.pass,
        warning: check.warning,
        detail: check.detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// Every criterion in order.
pub fn run_all(level: Level) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(*id, level))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ulps_against_printed() {
        let v: BigFixed = "2.7551046130236330003".parse().unwrap();
        assert_eq!(printed_ulps(&v, golden::ALPHA), BigFixed::from_integer(1));
        let v: BigFixed = "2.75510461302363300035".parse().unwrap();
        assert!(!within_one_ulp(&v, golden::ALPHA));
    }

    #[test]
    fn agreeing_digits_scale() {
        let a: BigFixed = "1.0000001".parse().unwrap();
        let b: BigFixed = "1".parse().unwrap();
        assert!((agreeing_digits(&a, &b) - 7.0).abs() < 1e-9);
        assert_eq!(agreeing_digits(&b, &b), f64::INFINITY);
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(11, Level::Quick).pass);
    }
}

//! `capset`: JSON front end for bounds, searches, verifiers and growth constants.
//!
//! Exit status is 0 when every reported check passes, 1 when one fails, and
//! 2 on usage or domain errors (message on stderr, nothing on stdout).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use capset_core::asymptotics::{
    alpha, characteristic_root, empirical_leading_constant, growth_constant_ratio,
    leading_constant, saddle_point, verify_recurrence, DEFAULT_DIGITS,
};
use capset_core::golden::{self, GROWTH_TABLE};
use capset_core::suite::{self, agreeing_digits, printed_ulps, Level};
use capset_core::{
    bound_for_d, is_progression_free, max_capset, optimal_bound, qnomial, sharp_bound,
    theorem_bound, verify_support_bound, BigFixed, BoundReport, PointSet,
};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "capset",
    version,
    about = "Cap set bounds, searches and growth constants"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Saddle,
    Ratio,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Bound on cap sets in F_3^n.
    Bound {
        #[arg(long)]
        n: u32,
        /// Evaluate the bound family at this d.
        #[arg(long, conflicts_with = "optimize_d")]
        d: Option<i64>,
        /// Minimize over every integer d (default when nothing else is asked).
        #[arg(long)]
        optimize_d: bool,
        /// Also report 3 * sum_{k <= 2n/3} C(n, k)_2.
        #[arg(long)]
        theorem: bool,
        /// Also report the sharp bound (n divisible by 3).
        #[arg(long)]
        sharp: bool,
    },
    /// Coefficient of x^k in (1 + x + ... + x^(q-1))^n.
    Qnomial {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 3)]
        q: u32,
    },
    /// Growth constant for F_q^n.
    Growth {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long, value_enum, default_value = "saddle")]
        method: Method,
        /// Largest n for the ratio method.
        #[arg(long, default_value_t = 120)]
        n_max: u32,
    },
    /// Growth constants for prime powers in a range, checked against the embedded table.
    Table {
        #[arg(long, default_value_t = 4)]
        qmin: u32,
        #[arg(long, default_value_t = 31)]
        qmax: u32,
    },
    /// Characteristic root and its cube root for q = 3.
    Alpha {
        #[arg(long, default_value_t = 19)]
        digits: u32,
    },
    /// Check the recurrence for C(3n, 2n)_2 exactly.
    VerifyRecurrence {
        #[arg(long, default_value_t = 100)]
        nmax: u32,
    },
    /// Leading constant of the sharp bound.
    LeadingConstant {
        #[arg(long, default_value_t = 19)]
        digits: u32,
        /// Also extrapolate sharp_bound(n) sqrt(n) / alpha^n over these n.
        #[arg(long, value_delimiter = ',')]
        empirical: Option<Vec<u32>>,
    },
    /// Maximum cap in F_3^n by branch and bound.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        budget: Option<u64>,
        /// Write the witness as a point-set file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the slice-rank verifier on a progression-free set.
    VerifyClp {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(
            long,
            conflicts_with = "from_search",
            required_unless_present = "from_search"
        )]
        set: Option<PathBuf>,
        /// Use the maximum cap found by `search`.
        #[arg(long)]
        from_search: bool,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
}

#[derive(Serialize)]
struct CheckEntry {
    name: String,
    pass: bool,
    detail: String,
}

impl CheckEntry {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    inputs: Value,
    result: Value,
    checks: Vec<CheckEntry>,
    elapsed_ms: u128,
}

type Outcome = Result<(&'static str, Value, Value, Vec<CheckEntry>), String>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn bound_checks(reports: &[BoundReport]) -> Vec<CheckEntry> {
    reports
        .iter()
        .flat_map(|r| {
            let method = to_value(&r.method);
            r.identities.iter().map(move |i| {
                CheckEntry::new(i.name.clone(), i.pass, method.as_str().unwrap_or_default())
            })
        })
        .collect()
}

fn cmd_bound(n: u32, d: Option<i64>, optimize_d: bool, theorem: bool, sharp: bool) -> Outcome {
    let mut reports = Vec::new();
    if let Some(d) = d {
        reports.push(bound_for_d(n, d, 3).map_err(|e| e.to_string())?);
    }
    if optimize_d || (d.is_none() && !theorem && !sharp) {
        reports.push(optimal_bound(n));
    }
    if theorem {
        reports.push(theorem_bound(n));
    }
    if sharp {
        reports.push(sharp_bound(n).map_err(|e| e.to_string())?);
    }
    let result = if reports.len() == 1 {
        to_value(&reports[0])
    } else {
        to_value(&reports)
    };
    let checks = bound_checks(&reports);
    Ok((
        "bound",
        json!({"n": n, "d": d, "optimize_d": optimize_d, "theorem": theorem, "sharp": sharp}),
        result,
        checks,
    ))
}

fn cmd_qnomial(n: u32, k: i64, q: u32) -> Outcome {
    let value = qnomial(n, k, q).map_err(|e| e.to_string())?;
    Ok((
        "qnomial",
        json!({"n": n, "k": k, "q": q}),
        json!(value.to_string()),
        Vec::new(),
    ))
}

fn cmd_growth(q: u32, digits: u32, method: Method, n_max: u32) -> Outcome {
    let mut result = serde_json::Map::new();
    let mut checks = Vec::new();
    let saddle = match method {
        Method::Saddle | Method::Both => {
            let mut s = saddle_point::<BigFixed>(q, digits).map_err(|e| e.to_string())?;
            s.constant = s.constant.rounded(digits);
            s.x0 = s.x0.rounded(digits);
            checks.push(CheckEntry::new(
                "residual_below_precision",
                s.residual < BigFixed::ulp(digits),
                format!("|g(x0)| = {}", s.residual.rounded(digits + 5)),
            ));
            s.residual = s.residual.rounded(digits + 5);
            result.insert("saddle".into(), to_value(&s));
            Some(s.constant)
        }
        Method::Ratio => None,
    };
    if let Method::Ratio | Method::Both = method {
        let mut r =
            growth_constant_ratio::<BigFixed>(q, n_max, digits).map_err(|e| e.to_string())?;
        r.estimate = r.estimate.rounded(digits);
        for (_, v) in r.ratios.iter_mut() {
            *v = v.rounded(digits);
        }
        if let Some(s) = &saddle {
            let rel = ((&r.estimate - s) / s.clone()).abs().to_f64();
            checks.push(CheckEntry::new(
                "methods_agree",
                rel < 1e-4,
                format!("relative difference {rel:.3e}"),
            ));
        }
        result.insert("ratio".into(), to_value(&r));
    }
    Ok((
        "growth",
        json!({"q": q, "digits": digits, "n_max": n_max}),
        Value::Object(result),
        checks,
    ))
}

fn is_prime_power(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q)
        .find(|p| q.is_multiple_of(*p))
        .expect("q >= 2 has a prime factor");
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

fn cmd_table(qmin: u32, qmax: u32) -> Outcome {
    if qmin > qmax {
        return Err(format!("qmin {qmin} exceeds qmax {qmax}"));
    }
    let qs: Vec<u32> = (qmin..=qmax).filter(|&q| is_prime_power(q)).collect();
    let rows: Vec<(u32, Option<&str>, BigFixed)> = qs
        .par_iter()
        .map(|&q| {
            let printed = GROWTH_TABLE.iter().find(|(t, _)| *t == q).map(|(_, s)| *s);
            let digits = printed.map_or(20, golden::printed_decimals);
            let value =
                capset_core::asymptotics::growth_constant(q, digits).map_err(|e| e.to_string())?;
            Ok((q, printed, value))
        })
        .collect::<Result<_, String>>()?;
    let mut checks = Vec::new();
    let mut out = Vec::new();
    for (q, printed, value) in rows {
        let mut row = json!({"q": q, "value": value.to_decimal_string(), "printed": printed});
        if let Some(p) = printed {
            let ulps = printed_ulps(&value, p);
            let pass = ulps <= BigFixed::from_integer(1);
            row["ulps"] = json!(ulps.to_decimal_string());
            row["pass"] = json!(pass);
            checks.push(CheckEntry::new(
                format!("q={q}"),
                pass,
                format!("computed {value}, printed {p}, {ulps} ulp"),
            ));
        }
        out.push(row);
    }
    Ok((
        "table",
        json!({"qmin": qmin, "qmax": qmax}),
        Value::Array(out),
        checks,
    ))
}

fn cmd_alpha(digits: u32) -> Outcome {
    let root = characteristic_root(digits);
    let a = alpha(digits);
    let mut checks = Vec::new();
    for (name, value, printed) in [
        (
            "characteristic_root_digits",
            characteristic_root(golden::printed_decimals(golden::CHARACTERISTIC_ROOT)),
            golden::CHARACTERISTIC_ROOT,
        ),
        (
            "alpha_digits",
            alpha(golden::printed_decimals(golden::ALPHA)),
            golden::ALPHA,
        ),
        (
            "alpha_long_digits",
            alpha(golden::printed_decimals(golden::ALPHA_LONG)),
            golden::ALPHA_LONG,
        ),
    ] {
        let ulps = printed_ulps(&value, printed);
        checks.push(CheckEntry::new(
            name,
            ulps <= BigFixed::from_integer(1),
            format!("{value} vs {printed}: {ulps} ulp"),
        ));
    }
    Ok((
        "alpha",
        json!({"digits": digits}),
        json!({"alpha": a, "characteristic_root": root}),
        checks,
    ))
}

fn cmd_verify_recurrence(nmax: u32) -> Outcome {
    let r = verify_recurrence(nmax).map_err(|e| e.to_string())?;
    let checks = vec![CheckEntry::new(
        "all_zero",
        r.all_zero,
        format!("first failure {:?}", r.first_failure),
    )];
    Ok((
        "verify-recurrence",
        json!({"nmax": nmax}),
        to_value(&r),
        checks,
    ))
}

fn cmd_leading_constant(digits: u32, empirical: Option<Vec<u32>>) -> Outcome {
    let closed = leading_constant(digits);
    let printed: BigFixed = golden::LEADING_CONSTANT
        .parse()
        .expect("golden values parse");
    let reference = leading_constant(golden::printed_decimals(golden::LEADING_CONSTANT));
    let agree = agreeing_digits(&reference, &printed);
    let mut checks = vec![CheckEntry::new(
        "agrees_with_printed_to_10_digits",
        agree >= 10.0,
        format!("{reference} vs printed {printed}: {agree:.2} significant digits"),
    )];
    let mut result = json!({"leading_constant": closed, "printed": golden::LEADING_CONSTANT, "agreeing_digits": agree});
    if let Some(ns) = &empirical {
        let e = empirical_leading_constant(ns, 20).map_err(|e| e.to_string())?;
        let rel = ((&e.extrapolated - &reference) / reference.clone())
            .abs()
            .to_f64();
        checks.push(CheckEntry::new(
            "empirical_within_1e-3",
            rel < 1e-3,
            format!("relative difference {rel:.3e}"),
        ));
        result["empirical"] = json!({
            "ns": e.ns,
            "normalized": e.normalized.iter().map(|v| v.rounded(20)).collect::<Vec<_>>(),
            "extrapolated": e.extrapolated,
        });
    }
    Ok((
        "leading-constant",
        json!({"digits": digits, "empirical": empirical}),
        result,
        checks,
    ))
}

fn cmd_search(n: u32, budget: Option<u64>, out: Option<PathBuf>) -> Outcome {
    let r = max_capset(n, budget).map_err(|e| e.to_string())?;
    if let Some(path) = &out {
        std::fs::write(path, r.witness.to_point_set().to_file_string())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let checks = vec![CheckEntry::new(
        "witness_progression_free",
        is_progression_free(&r.witness) && r.witness.len() == r.max_size,
        format!("{} points", r.witness.len()),
    )];
    let inputs = json!({"n": n, "budget": budget, "out": out.map(|p| p.display().to_string())});
    Ok(("search", inputs, to_value(&r), checks))
}

fn cmd_verify_clp(n: u32, d: u32, set: Option<PathBuf>, from_search: bool) -> Outcome {
    let points = match &set {
        Some(path) => PointSet::read(path, 3, Some(n)).map_err(|e| e.to_string())?,
        None => max_capset(n, None)
            .map_err(|e| e.to_string())?
            .witness
            .to_point_set(),
    };
    let r = verify_support_bound(n, d, &points).map_err(|e| e.to_string())?;
    let checks = vec![
        CheckEntry::new(
            "diagonal",
            r.diagonal_ok,
            format!("{} x {} product matrix", r.set_size, r.set_size),
        ),
        CheckEntry::new(
            "rank_cap",
            r.rank_ok,
            format!("rank {} <= {} rank-one terms", r.rank, r.rank_one_terms),
        ),
        CheckEntry::new(
            "support_cap",
            r.support_ok,
            format!("support {} <= {}", r.max_support, r.support_cap),
        ),
        CheckEntry::new(
            "dimension_bound",
            r.bound_ok,
            format!("dim V = {} >= {}", r.dim_v, r.dim_lower_bound),
        ),
        CheckEntry::new(
            "decomposition",
            r.decomposition_ok,
            "rank-one sum reproduces the product matrix",
        ),
    ];
    let inputs = json!({"n": n, "d": d, "set": set.map(|p| p.display().to_string()), "from_search": from_search});
    Ok(("verify-clp", inputs, to_value(&r), checks))
}

fn cmd_verify_all(level: LevelArg) -> Outcome {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let outcomes = suite::run_all(level);
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let checks = outcomes
        .iter()
        .map(|o| CheckEntry::new(format!("C{} {}", o.id, o.name), o.pass, o.detail.clone()))
        .collect();
    Ok((
        "verify-all",
        json!({"level": level}),
        to_value(&outcomes),
        checks,
    ))
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Bound {
            n,
            d,
            optimize_d,
            theorem,
            sharp,
        } => cmd_bound(n, d, optimize_d, theorem, sharp),
        Command::Qnomial { n, k, q } => cmd_qnomial(n, k, q),
        Command::Growth {
            q,
            digits,
            method,
            n_max,
        } => cmd_growth(q, digits, method, n_max),
        Command::Table { qmin, qmax } => cmd_table(qmin, qmax),
        Command::Alpha { digits } => cmd_alpha(digits),
        Command::VerifyRecurrence { nmax } => cmd_verify_recurrence(nmax),
        Command::LeadingConstant { digits, empirical } => cmd_leading_constant(digits, empirical),
        Command::Search { n, budget, out } => cmd_search(n, budget, out),
        Command::VerifyClp {
            n,
            d,
            set,
            from_search,
        } => cmd_verify_clp(n, d, set, from_search),
        Command::VerifyAll { level } => cmd_verify_all(level),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match dispatch(cli.command) {
        Ok((command, inputs, result, checks)) => {
            let ok = checks.iter().all(|c| c.pass);
            let report = RunReport {
                command,
                inputs,
                result,
                checks,
                elapsed_ms: start.elapsed().as_millis(),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // A closed pipe downstream is not an error worth a panic.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

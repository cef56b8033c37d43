//! Runs every acceptance criterion at full size and prints one line each.
//!
//! Built without the libtest harness so the lines are never captured. Pass a
//! criterion number (`cargo test --test acceptance -- 6`) to run a subset.
//! Criterion 9 is soft and reports misses as warnings.

use std::process::ExitCode;

use capset_core::suite::{run_criterion, Level, CRITERIA};

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, _) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let outcome = run_criterion(id, Level::Full);
        println!("{}", outcome.line());
        ran += 1;
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed; {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

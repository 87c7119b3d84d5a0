//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//! Wall-time budgets are printed but not enforced.

use std::process::ExitCode;

use lscg::suites::{run_suite, DEFAULT_SEED, SUITES};

fn main() -> ExitCode {
    let mut failed = 0;
    for name in SUITES {
        match run_suite(name, DEFAULT_SEED) {
            Ok(r) => {
                println!("{r}");
                failed += !r.passed as usize;
            }
            Err(e) => {
                println!("[FAIL] {name}: error {e}");
                failed += 1;
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", SUITES.len() - failed, SUITES.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite: runs every criterion once, prints one line per
//! criterion with its notes, then exits non-zero if any criterion failed.
//!
//! The target has no test harness, so the report is printed on every run
//! and not only with `--nocapture`. Harness flags such as `--nocapture` are
//! accepted and ignored.

use std::process::ExitCode;

use ptasep_core::verify::{run_suite, Suite, VerifyConfig};

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let outcomes = run_suite(Suite::All, &cfg);
    for o in &outcomes {
        println!("{}", o.line());
        for note in &o.notes {
            println!("    {note}");
        }
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("acceptance: {} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}

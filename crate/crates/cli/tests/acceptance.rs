//! Runs every acceptance criterion once, in order, printing one line each.
//! Set `ACCEPTANCE_ONLY=7` (comma-separated ids) to run a subset.
//!
//! Built without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use spectral_cover_cli::checks::{run_check, CRITERIA};

fn main() -> ExitCode {
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = Vec::new();
    for id in 1..=CRITERIA.len() {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let o = run_check(id, 0);
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {id}: {} [{:.1} s / {} s] {}", o.title, o.seconds, o.limit_seconds, o.detail);
        if !o.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}

//! Runs the eleven acceptance criteria and prints one line per criterion.
//!
//! All checks are exact (tolerance 0). A criterion fails if any of its checks fails. The test
//! itself only fails if a check outside the documented conflict list fails. It runs without the
//! libtest harness so that the lines below always reach the test log.

use acaf::checks::{is_known_conflict, run_criterion, CRITERIA};
use std::process::ExitCode;
use std::time::Instant;

const SEED: u64 = 0;
const TOLERANCE: &str = "exact (tol = 0)";

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    for &(id, title) in CRITERIA.iter() {
        let start = Instant::now();
        let rep = run_criterion(id, SEED).expect("criterion id");
        let failed: Vec<_> = rep.failures().collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {status} [{title}] {}/{} checks, {TOLERANCE}, {:.1}s",
            rep.checks.len() - failed.len(),
            rep.checks.len(),
            start.elapsed().as_secs_f64()
        );
        for c in failed {
            let kind = if is_known_conflict(&c.name) { "documented conflict" } else { "UNEXPECTED" };
            println!("    {kind}: {} ({}): {}", c.name, c.anchor, c.residual);
            if !is_known_conflict(&c.name) {
                unexpected.push(c.name.clone());
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no failures outside the documented conflicts");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}

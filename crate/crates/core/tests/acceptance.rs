//! Acceptance run: one line per criterion with its outcome and timing.
//! Exits nonzero when any criterion fails.

use khtail_core::lab::suite::{run_suite, SUITES};
use khtail_core::lab::{LabConfig, Outcome};

fn main() {
    let cfg = LabConfig::default();
    let mut failed = 0;
    for id in 1..=SUITES.len() {
        let r = run_suite(id, &cfg);
        let tag = match r.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Unverified => "UNVERIFIED",
        };
        println!("criterion {:>2} {:<20} {:<10} {:>4} checks {:>9.3}s", id, r.name, tag, r.checks, r.seconds);
        for f in r.failures.iter().take(5) {
            println!("    failed: {f}");
        }
        if r.outcome == Outcome::Fail {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

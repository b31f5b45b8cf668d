//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use steadycorr::verify::{CRITERIA, VerifyOptions};

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut failed = Vec::new();
    println!("\nrunning {} acceptance criteria", CRITERIA.len());
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = c.run(&opts);
        println!("{}  ({:.1} s)", outcome.line(), start.elapsed().as_secs_f64());
        if !outcome.passed {
            failed.push(outcome.id);
        }
    }
    if failed.is_empty() {
        println!("\nacceptance: all {} criteria passed\n", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("\nacceptance: {} of {} criteria failed: {failed:?}\n", failed.len(), CRITERIA.len());
        ExitCode::FAILURE
    }
}

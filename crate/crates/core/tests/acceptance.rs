//! Runs the twelve acceptance criteria and prints one line per criterion.
//!
//! No libtest harness, so the lines show up in plain `cargo test` output.

use std::process::ExitCode;
use std::time::Instant;

use autdual::suites::{run_criterion, DEFAULT_SEED, TITLES};

fn main() -> ExitCode {
    println!("acceptance criteria, seed {DEFAULT_SEED}");
    let mut failed = Vec::new();
    for id in 1..=TITLES.len() {
        let start = Instant::now();
        let r = run_criterion(id, DEFAULT_SEED);
        println!("{r} ({:.2?})", start.elapsed());
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", TITLES.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}

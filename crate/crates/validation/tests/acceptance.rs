//! Prints one PASS/FAIL line per acceptance criterion, followed by the
//! individual checks. Criterion numbers given as arguments restrict the run.
//! Exits non-zero when any selected criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use ginlab_validation::criteria;

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for criterion in criteria::all() {
        if !selected.is_empty() && !selected.contains(&criterion.id) {
            continue;
        }
        let start = Instant::now();
        let verdict = criterion.evaluate();
        let status = if verdict.pass() { "PASS" } else { "FAIL" };
        println!("{status} criterion {:2}: {} ({:.1} s)", criterion.id, criterion.title, start.elapsed().as_secs_f64());
        print!("{}", verdict.render());
        ran += 1;
        if !verdict.pass() {
            failed += 1;
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

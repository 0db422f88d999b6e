//! One line per acceptance criterion; fails if any criterion fails.

use std::process::ExitCode;

use kohn_noether::selftest::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let ids: Vec<u8> = CRITERIA.iter().map(|c| c.id).collect();
    assert_eq!(ids, (1..=11).collect::<Vec<_>>());
    let mut failed = Vec::new();
    for id in ids {
        let r = run_criterion(id);
        println!("{}", r.line());
        for d in &r.details {
            println!("    {d}");
        }
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria {failed:?} failed");
        ExitCode::FAILURE
    }
}

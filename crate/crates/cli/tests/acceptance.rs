//! Runs every acceptance criterion at its stated tolerance and runtime
//! budget, one line per criterion; exits nonzero if any fails.

use hodgeset::verify::{run_criterion, summary_line, Status, CRITERIA};

const SEED: u64 = 42;

fn main() {
    let mut failed = Vec::new();
    println!("running {} acceptance criteria", CRITERIA.len());
    for c in &CRITERIA {
        let r = run_criterion(c.id, SEED, 1.0).expect("known criterion");
        println!("{}", summary_line(&r));
        if r.status != Status::Pass {
            println!("     measured: {}", r.measured);
            println!("     expected: {}", r.expected);
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
    } else {
        println!("acceptance: criteria {failed:?} failed");
        std::process::exit(1);
    }
}

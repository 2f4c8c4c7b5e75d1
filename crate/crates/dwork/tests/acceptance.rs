//! Runs every acceptance criterion and prints one line per criterion.

use dwork::suite;
use dwork::Parallelism;

fn main() {
    if std::env::args().any(|a| a == "--list") {
        for id in 1..=suite::criterion_count() {
            println!("criterion_{id}: test");
        }
        return;
    }
    let outcomes = suite::run_all(Parallelism::Parallel);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    println!(
        "acceptance: {} of {} criteria passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion.

use ccch_core::validation::{run_suite, SuiteConfig};

fn main() {
    let reports = run_suite(&SuiteConfig::default());
    for r in &reports {
        println!("{}", r.summary());
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!(
        "acceptance: {} of {} criteria passed",
        reports.len() - failed.len(),
        reports.len()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

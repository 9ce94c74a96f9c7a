//! One PASS/FAIL line per acceptance criterion, at the default instance
//! counts and seed 0.

use std::io::Write;
use std::time::Instant;

use treealg::suites::{run, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    // written to the stdout handle directly so the lines survive output capture
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for &(k, _, _) in CRITERIA.iter() {
        let start = Instant::now();
        let report = run(k, 0, None).expect("criterion exists");
        let secs = start.elapsed().as_secs_f64();
        let verdict = if report.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} {k:>2} {}: {} ({secs:.2}s)", report.title, report.detail).unwrap();
        if !report.passed {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
